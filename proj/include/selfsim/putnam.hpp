#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/action.hpp"
#include "selfsim/graph.hpp"
#include "selfsim/paths.hpp"

namespace selfsim {

struct GraphMapDecl {
  std::map<std::string, std::string> vertices;
  std::map<std::string, std::string> edges;
};

struct EmbeddingPairDecl {
  GraphDecl H;
  GraphDecl E;
  GraphMapDecl xi0;
  GraphMapDecl xi1;
};

std::vector<Defect> validate_pair(const EmbeddingPairDecl& decl);

// Two embeddings xi^0, xi^1 : H -> E agreeing on vertices with disjoint edge images.
struct EmbeddingPair {
  Graph H;
  std::shared_ptr<const Graph> E;
  std::vector<VertexIndex> vertex_map;         // H-vertex -> E-vertex
  std::vector<EdgeIndex> edge_map[2];          // H-edge -> E-edge
  std::vector<std::optional<std::pair<EdgeIndex, int>>> label;  // E-edge -> (h, i) if e = xi^i(h)

  static EmbeddingPair from_decl(const EmbeddingPairDecl& decl);  // throws INVALID_INPUT
  std::optional<VertexIndex> h_vertex(VertexIndex e_vertex) const;
};

std::optional<std::size_t> ell(const EmbeddingPair& xi, VertexIndex h_vertex);

// Moduli 2^ell(v) on xi(H^0) (kInfinite when ell is unbounded), 1 elsewhere.
std::vector<Modulus> xi_moduli(const EmbeddingPair& xi);
StepResult xi_step(const EmbeddingPair& xi, const Element& g, EdgeIndex e);
std::shared_ptr<const ActionSystem> xi_system(const EmbeddingPair& xi);

bool xi_equivalent(const EmbeddingPair& xi, const EPPath& mu, const EPPath& nu);

}  // namespace selfsim
