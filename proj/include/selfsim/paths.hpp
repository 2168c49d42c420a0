#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

// Finite path e_{-n}...e_{-1}, stored left to right. `start` is r(path); it
// carries the vertex of a length-0 path.
struct Path {
  VertexIndex start = 0;
  std::vector<EdgeIndex> edges;

  std::size_t length() const { return edges.size(); }
  VertexIndex range() const { return start; }
  VertexIndex source(const Graph& g) const { return edges.empty() ? start : g.source(edges.back()); }
  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

bool composable(const Graph& g, const std::vector<EdgeIndex>& edges);
Path make_path(const Graph& g, std::vector<EdgeIndex> edges);  // throws on a broken path
Path concat(const Graph& g, const Path& left, const Path& right);

// All paths of length n, or those with range v.
std::vector<Path> enumerate_paths(const Graph& g, std::size_t n);
std::vector<Path> enumerate_paths_from(const Graph& g, VertexIndex v, std::size_t n);

// Left-infinite eventually periodic path ...cycle cycle suffix, in canonical
// form: primitive cycle and minimal suffix.
class EPPath {
 public:
  EPPath() = default;
  static EPPath make(const Graph& g, std::vector<EdgeIndex> cycle, std::vector<EdgeIndex> suffix);

  const std::vector<EdgeIndex>& cycle() const { return cycle_; }
  const std::vector<EdgeIndex>& suffix() const { return suffix_; }
  std::size_t period() const { return cycle_.size(); }
  std::size_t preperiod() const { return suffix_.size(); }

  // Edge at a negative position.
  EdgeIndex at(std::int64_t position) const;
  // Last n edges.
  Path truncate(const Graph& g, std::size_t n) const;
  // Drop the edge at -1.
  EPPath shift(const Graph& g) const;
  // The left-infinite path of positions <= position, reindexed to end at -1.
  EPPath up_to(const Graph& g, std::int64_t position) const;

  bool operator==(const EPPath&) const = default;
  auto operator<=>(const EPPath&) const = default;

 private:
  std::vector<EdgeIndex> cycle_;
  std::vector<EdgeIndex> suffix_;
};

// Positions <= -joint_horizon(a,b) - 1 repeat with period joint_period(a,b) in both paths.
std::size_t joint_preperiod(const EPPath& a, const EPPath& b);
std::size_t joint_period(const EPPath& a, const EPPath& b);

// Random eventually periodic path: a closed walk of length <= max_cycle followed by
// a random suffix of length <= max_suffix. Throws if the graph has no cycle.
EPPath random_eppath(const Graph& g, std::size_t max_cycle, std::size_t max_suffix, std::mt19937_64& rng);
// A random edge with the same range and source as e.
EdgeIndex parallel_edge(const Graph& g, EdgeIndex e, std::mt19937_64& rng);
// Same vertex sequence as mu, with each edge replaced by a random parallel edge.
EPPath random_sibling(const Graph& g, const EPPath& mu, std::mt19937_64& rng);

}  // namespace selfsim
