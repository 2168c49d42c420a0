#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/numeric.hpp"

namespace selfsim {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;
using EdgeMask = std::vector<bool>;

struct EdgeDecl {
  std::string id;
  std::string range;
  std::string source;
};

// Unvalidated graph description, as read from JSON.
struct GraphDecl {
  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
};

struct Defect {
  std::string id;
  std::string message;
};

std::vector<Defect> validate(const GraphDecl& decl);

// Finite directed multigraph. Edge e points from source(e) to range(e); a path
// e_{-n}...e_{-1} satisfies s(e_k) = r(e_{k+1}).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::vector<std::string> vertices);
  static Graph from_decl(const GraphDecl& decl);

  EdgeIndex add_edge(std::string id, VertexIndex range, VertexIndex source);

  std::size_t num_vertices() const { return vertex_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::string& vertex_name(VertexIndex v) const { return vertex_names_.at(v); }
  const std::string& edge_name(EdgeIndex e) const { return edges_.at(e).id; }
  VertexIndex range(EdgeIndex e) const { return edges_[e].range; }
  VertexIndex source(EdgeIndex e) const { return edges_[e].source; }
  std::optional<VertexIndex> find_vertex(const std::string& id) const;
  std::optional<EdgeIndex> find_edge(const std::string& id) const;
  VertexIndex vertex(const std::string& id) const;  // throws InvalidInput
  EdgeIndex edge(const std::string& id) const;      // throws InvalidInput

  // vE^1 and E^1v.
  const std::vector<EdgeIndex>& edges_with_range(VertexIndex v) const { return by_range_[v]; }
  const std::vector<EdgeIndex>& edges_with_source(VertexIndex v) const { return by_source_[v]; }

  GraphDecl to_decl() const;
  std::vector<std::vector<std::int64_t>> adjacency() const;  // [range][source]

 private:
  struct EdgeRec {
    std::string id;
    VertexIndex range;
    VertexIndex source;
  };
  std::vector<std::string> vertex_names_;
  std::vector<EdgeRec> edges_;
  std::map<std::string, VertexIndex> vertex_lookup_;
  std::map<std::string, EdgeIndex> edge_lookup_;
  std::vector<std::vector<EdgeIndex>> by_range_;
  std::vector<std::vector<EdgeIndex>> by_source_;
};

struct SourcesAndSinks {
  std::vector<VertexIndex> sources;
  std::vector<VertexIndex> sinks;
};
SourcesAndSinks sources_and_sinks(const Graph& g);

struct SccResult {
  std::vector<std::size_t> component;  // vertex -> component index
  std::vector<std::vector<VertexIndex>> members;
  std::vector<bool> nontrivial;
};
// Components of the subgraph on the edges selected by `support` (all edges if empty).
SccResult strongly_connected_components(const Graph& g, const EdgeMask& support = {});

// Length of the longest path y with r(y) = v; nullopt for unbounded.
std::optional<std::size_t> longest_path_into(const Graph& g, VertexIndex v,
                                             const EdgeMask& support = {});

// Maximum over cycles of (product of weights)^(1/length), as (p/q)^(1/L).
struct GeometricMean {
  bool none = true;
  BigInt p = 0;
  BigInt q = 1;
  std::size_t length = 1;
  std::vector<EdgeIndex> witness;

  // (p/q)^(1/L) written with the smallest L possible.
  std::string str() const;
  bool less_than_one() const { return none || p < q; }
};
// Three-way comparison of (p1/q1)^(1/L1) and (p2/q2)^(1/L2).
int compare_roots(const BigInt& p1, const BigInt& q1, std::size_t l1, const BigInt& p2,
                  const BigInt& q2, std::size_t l2);
GeometricMean max_geometric_mean_cycle(const Graph& g, const std::vector<Rational>& weight,
                                       const EdgeMask& support = {});

}  // namespace selfsim
