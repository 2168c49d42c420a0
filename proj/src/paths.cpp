#include "selfsim/paths.hpp"

#include <algorithm>
#include <numeric>

#include "selfsim/error.hpp"

namespace selfsim {

bool composable(const Graph& g, const std::vector<EdgeIndex>& edges) {
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (g.source(edges[k]) != g.range(edges[k + 1])) return false;
  }
  return true;
}

Path make_path(const Graph& g, std::vector<EdgeIndex> edges) {
  if (edges.empty()) throw Error(ErrorCode::InvalidInput, "use a vertex path for length 0");
  for (EdgeIndex e : edges) {
    if (e >= g.num_edges()) throw Error(ErrorCode::InvalidInput, "edge index out of range");
  }
  if (!composable(g, edges)) throw Error(ErrorCode::InvalidInput, "edges do not compose");
  Path p;
  p.start = g.range(edges.front());
  p.edges = std::move(edges);
  return p;
}

Path concat(const Graph& g, const Path& left, const Path& right) {
  if (left.source(g) != right.start) throw Error(ErrorCode::DomainMismatch, "paths do not compose");
  Path out = left;
  out.edges.insert(out.edges.end(), right.edges.begin(), right.edges.end());
  return out;
}

std::vector<Path> enumerate_paths_from(const Graph& g, VertexIndex v, std::size_t n) {
  std::vector<Path> layer{Path{v, {}}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Path> next;
    for (const auto& p : layer) {
      for (EdgeIndex e : g.edges_with_range(p.source(g))) {
        Path q = p;
        q.edges.push_back(e);
        next.push_back(std::move(q));
      }
    }
    layer = std::move(next);
  }
  return layer;
}

std::vector<Path> enumerate_paths(const Graph& g, std::size_t n) {
  std::vector<Path> all;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
    auto part = enumerate_paths_from(g, v, n);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

EPPath EPPath::make(const Graph& g, std::vector<EdgeIndex> cycle, std::vector<EdgeIndex> suffix) {
  if (cycle.empty()) throw Error(ErrorCode::InvalidInput, "eventually periodic path needs a cycle");
  for (EdgeIndex e : cycle)
    if (e >= g.num_edges()) throw Error(ErrorCode::InvalidInput, "edge index out of range");
  for (EdgeIndex e : suffix)
    if (e >= g.num_edges()) throw Error(ErrorCode::InvalidInput, "edge index out of range");
  if (!composable(g, cycle) || g.source(cycle.back()) != g.range(cycle.front()))
    throw Error(ErrorCode::InvalidInput, "cycle does not close up");
  if (!suffix.empty() && (!composable(g, suffix) || g.source(cycle.back()) != g.range(suffix.front())))
    throw Error(ErrorCode::InvalidInput, "suffix does not continue the cycle");

  // Primitive root of the cycle.
  const std::size_t len = cycle.size();
  for (std::size_t p = 1; p <= len; ++p) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (std::size_t k = p; k < len && periodic; ++k) periodic = cycle[k] == cycle[k - p];
    if (periodic) {
      cycle.resize(p);
      break;
    }
  }
  // c^inf c_1 s = (c_2 ... c_L c_1)^inf s.
  std::size_t absorbed = 0;
  while (absorbed < suffix.size() && suffix[absorbed] == cycle.front()) {
    std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
    ++absorbed;
  }
  suffix.erase(suffix.begin(), suffix.begin() + static_cast<std::ptrdiff_t>(absorbed));

  EPPath out;
  out.cycle_ = std::move(cycle);
  out.suffix_ = std::move(suffix);
  return out;
}

EdgeIndex EPPath::at(std::int64_t position) const {
  if (position >= 0) throw Error(ErrorCode::InvalidInput, "positions are negative");
  std::size_t back = static_cast<std::size_t>(-position);  // 1-based distance from the right end
  if (back <= suffix_.size()) return suffix_[suffix_.size() - back];
  std::size_t into = (back - suffix_.size() - 1) % cycle_.size();
  return cycle_[cycle_.size() - 1 - into];
}

Path EPPath::truncate(const Graph& g, std::size_t n) const {
  if (n == 0) {
    VertexIndex v = suffix_.empty() ? g.source(cycle_.back()) : g.source(suffix_.back());
    return Path{v, {}};
  }
  std::vector<EdgeIndex> edges(n);
  for (std::size_t k = 0; k < n; ++k) edges[k] = at(-static_cast<std::int64_t>(n - k));
  return make_path(g, std::move(edges));
}

EPPath EPPath::up_to(const Graph& g, std::int64_t position) const {
  if (position >= 0) throw Error(ErrorCode::InvalidInput, "positions are negative");
  std::size_t drop = static_cast<std::size_t>(-position - 1);
  if (drop <= suffix_.size()) {
    std::vector<EdgeIndex> s(suffix_.begin(), suffix_.end() - static_cast<std::ptrdiff_t>(drop));
    return make(g, cycle_, std::move(s));
  }
  std::size_t into = (drop - suffix_.size()) % cycle_.size();
  std::vector<EdgeIndex> s(cycle_.begin(), cycle_.end() - static_cast<std::ptrdiff_t>(into));
  return make(g, cycle_, std::move(s));
}

EPPath EPPath::shift(const Graph& g) const { return up_to(g, -2); }

std::size_t joint_preperiod(const EPPath& a, const EPPath& b) {
  return std::max(a.preperiod(), b.preperiod());
}

std::size_t joint_period(const EPPath& a, const EPPath& b) { return std::lcm(a.period(), b.period()); }

}  // namespace selfsim

namespace selfsim {

namespace {

std::vector<Path> closed_walks(const Graph& g, std::size_t max_len) {
  std::vector<Path> out;
  for (std::size_t len = 1; len <= max_len; ++len)
    for (auto& p : enumerate_paths(g, len))
      if (p.source(g) == p.start) out.push_back(std::move(p));
  return out;
}

}  // namespace

EdgeIndex parallel_edge(const Graph& g, EdgeIndex e, std::mt19937_64& rng) {
  std::vector<EdgeIndex> options;
  for (EdgeIndex f : g.edges_with_range(g.range(e)))
    if (g.source(f) == g.source(e)) options.push_back(f);
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

EPPath random_eppath(const Graph& g, std::size_t max_cycle, std::size_t max_suffix, std::mt19937_64& rng) {
  auto cycles = closed_walks(g, std::max<std::size_t>(max_cycle, 1));
  if (cycles.empty()) throw Error(ErrorCode::Precondition, "graph has no cycles of the requested length");
  const Path& c = cycles[std::uniform_int_distribution<std::size_t>(0, cycles.size() - 1)(rng)];
  std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_suffix)(rng);
  std::vector<EdgeIndex> suffix;
  VertexIndex x = c.start;
  for (std::size_t k = 0; k < len; ++k) {
    const auto& out = g.edges_with_range(x);
    if (out.empty()) break;
    EdgeIndex e = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
    suffix.push_back(e);
    x = g.source(e);
  }
  return EPPath::make(g, c.edges, std::move(suffix));
}

EPPath random_sibling(const Graph& g, const EPPath& mu, std::mt19937_64& rng) {
  std::vector<EdgeIndex> cycle = mu.cycle(), suffix = mu.suffix();
  for (auto& e : cycle) e = parallel_edge(g, e, rng);
  for (auto& e : suffix) e = parallel_edge(g, e, rng);
  return EPPath::make(g, std::move(cycle), std::move(suffix));
}

}  // namespace selfsim
