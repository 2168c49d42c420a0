#include "selfsim/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

std::vector<Defect> validate(const GraphDecl& decl) {
  std::vector<Defect> defects;
  std::set<std::string> vertices;
  for (const auto& v : decl.vertices) {
    if (!vertices.insert(v).second) defects.push_back({v, "duplicate vertex id"});
  }
  std::set<std::string> edges;
  for (const auto& e : decl.edges) {
    if (!edges.insert(e.id).second) defects.push_back({e.id, "duplicate edge id"});
    if (!vertices.count(e.range))
      defects.push_back({e.id, "range vertex '" + e.range + "' is not declared"});
    if (!vertices.count(e.source))
      defects.push_back({e.id, "source vertex '" + e.source + "' is not declared"});
  }
  return defects;
}

Graph::Graph(std::vector<std::string> vertices) : vertex_names_(std::move(vertices)) {
  for (VertexIndex v = 0; v < vertex_names_.size(); ++v) {
    if (!vertex_lookup_.emplace(vertex_names_[v], v).second)
      throw Error(ErrorCode::InvalidInput, "duplicate vertex id '" + vertex_names_[v] + "'");
  }
  by_range_.resize(vertex_names_.size());
  by_source_.resize(vertex_names_.size());
}

Graph Graph::from_decl(const GraphDecl& decl) {
  auto defects = validate(decl);
  if (!defects.empty())
    throw Error(ErrorCode::InvalidInput, defects.front().id + ": " + defects.front().message);
  Graph g(decl.vertices);
  for (const auto& e : decl.edges) g.add_edge(e.id, g.vertex(e.range), g.vertex(e.source));
  return g;
}

EdgeIndex Graph::add_edge(std::string id, VertexIndex range, VertexIndex source) {
  if (range >= num_vertices() || source >= num_vertices())
    throw Error(ErrorCode::InvalidInput, "edge '" + id + "' has an undeclared endpoint");
  EdgeIndex e = edges_.size();
  if (!edge_lookup_.emplace(id, e).second)
    throw Error(ErrorCode::InvalidInput, "duplicate edge id '" + id + "'");
  edges_.push_back({std::move(id), range, source});
  by_range_[range].push_back(e);
  by_source_[source].push_back(e);
  return e;
}

std::optional<VertexIndex> Graph::find_vertex(const std::string& id) const {
  auto it = vertex_lookup_.find(id);
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> Graph::find_edge(const std::string& id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

VertexIndex Graph::vertex(const std::string& id) const {
  auto v = find_vertex(id);
  if (!v) throw Error(ErrorCode::InvalidInput, "unknown vertex '" + id + "'");
  return *v;
}

EdgeIndex Graph::edge(const std::string& id) const {
  auto e = find_edge(id);
  if (!e) throw Error(ErrorCode::InvalidInput, "unknown edge '" + id + "'");
  return *e;
}

GraphDecl Graph::to_decl() const {
  GraphDecl d;
  d.vertices = vertex_names_;
  for (const auto& e : edges_)
    d.edges.push_back({e.id, vertex_names_[e.range], vertex_names_[e.source]});
  return d;
}

std::vector<std::vector<std::int64_t>> Graph::adjacency() const {
  std::vector<std::vector<std::int64_t>> a(num_vertices(), std::vector<std::int64_t>(num_vertices(), 0));
  for (const auto& e : edges_) ++a[e.range][e.source];
  return a;
}

SourcesAndSinks sources_and_sinks(const Graph& g) {
  SourcesAndSinks out;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
    if (g.edges_with_range(v).empty()) out.sources.push_back(v);
    if (g.edges_with_source(v).empty()) out.sinks.push_back(v);
  }
  return out;
}

namespace {

bool selected(const EdgeMask& support, EdgeIndex e) { return support.empty() || support[e]; }

}  // namespace

SccResult strongly_connected_components(const Graph& g, const EdgeMask& support) {
  const std::size_t n = g.num_vertices();
  const std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexIndex> stack;
  SccResult result;
  result.component.assign(n, unset);
  std::size_t counter = 0;

  // Iterative Tarjan over arrows source -> range.
  for (VertexIndex root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    std::vector<std::pair<VertexIndex, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& out = g.edges_with_source(v);
      if (pos < out.size()) {
        EdgeIndex e = out[pos++];
        if (!selected(support, e)) continue;
        VertexIndex w = g.range(e);
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<VertexIndex> members;
        VertexIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          result.component[w] = result.members.size();
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        result.members.push_back(std::move(members));
      }
      VertexIndex finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        VertexIndex parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  result.nontrivial.assign(result.members.size(), false);
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!selected(support, e)) continue;
    if (result.component[g.range(e)] == result.component[g.source(e)])
      result.nontrivial[result.component[g.range(e)]] = true;
  }
  return result;
}

std::optional<std::size_t> longest_path_into(const Graph& g, VertexIndex v, const EdgeMask& support) {
  auto scc = strongly_connected_components(g, support);
  const std::size_t unknown = static_cast<std::size_t>(-1);
  const std::size_t infinite = static_cast<std::size_t>(-2);
  std::vector<std::size_t> memo(g.num_vertices(), unknown);
  // Extending a path y with r(y) = x on the right means stepping from x to s(e)
  // for an edge e with r(e) = x. Tarjan's numbering is a reverse topological
  // order of the arrow graph, so recursion depth is bounded by the vertex count.
  std::function<std::size_t(VertexIndex)> visit = [&](VertexIndex x) -> std::size_t {
    if (memo[x] != unknown) return memo[x];
    if (scc.nontrivial[scc.component[x]]) return memo[x] = infinite;
    std::size_t best = 0;
    for (EdgeIndex e : g.edges_with_range(x)) {
      if (!selected(support, e)) continue;
      std::size_t sub = visit(g.source(e));
      if (sub == infinite) return memo[x] = infinite;
      best = std::max(best, sub + 1);
    }
    return memo[x] = best;
  };
  std::size_t r = visit(v);
  if (r == infinite) return std::nullopt;
  return r;
}

int compare_roots(const BigInt& p1, const BigInt& q1, std::size_t l1, const BigInt& p2,
                  const BigInt& q2, std::size_t l2) {
  BigInt lhs = ipow(p1, l2) * ipow(q2, l1);
  BigInt rhs = ipow(p2, l1) * ipow(q1, l2);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string GeometricMean::str() const {
  if (none) return "0";
  Rational value(p, q);
  BigInt num = numerator(value), den = denominator(value);
  std::size_t l = length;
  for (std::size_t k = l; k >= 2; --k) {
    if (l % k != 0) continue;
    BigInt rn = integer_root(num, static_cast<unsigned>(k));
    BigInt rd = integer_root(den, static_cast<unsigned>(k));
    if (ipow(rn, k) == num && ipow(rd, k) == den) {
      num = rn;
      den = rd;
      l /= k;
      break;
    }
  }
  std::string base = to_string(Rational(num, den));
  if (l == 1) return base;
  return "(" + (den == 1 ? base + "/1" : base) + ")^(1/" + std::to_string(l) + ")";
}

GeometricMean max_geometric_mean_cycle(const Graph& g, const std::vector<Rational>& weight,
                                       const EdgeMask& support) {
  GeometricMean best;
  auto scc = strongly_connected_components(g, support);
  for (std::size_t c = 0; c < scc.members.size(); ++c) {
    if (!scc.nontrivial[c]) continue;
    const auto& members = scc.members[c];
    const std::size_t n = members.size();
    auto inside = [&](EdgeIndex e) {
      return selected(support, e) && scc.component[g.range(e)] == c && scc.component[g.source(e)] == c;
    };
    // Every closed walk splits into simple cycles, so the best closed walk of
    // length L <= n starting at some vertex attains the maximum mean.
    for (VertexIndex start : members) {
      // table[k][x]: best product of a path of length k with range `start` and source x.
      std::vector<std::map<VertexIndex, std::pair<Rational, EdgeIndex>>> table(n + 1);
      table[0][start] = {Rational(1), 0};
      for (std::size_t k = 0; k < n; ++k) {
        for (const auto& [x, entry] : table[k]) {
          for (EdgeIndex e : g.edges_with_range(x)) {
            if (!inside(e)) continue;
            Rational value = entry.first * weight[e];
            auto it = table[k + 1].find(g.source(e));
            if (it == table[k + 1].end() || value > it->second.first)
              table[k + 1][g.source(e)] = {value, e};
          }
        }
      }
      for (std::size_t len = 1; len <= n; ++len) {
        auto it = table[len].find(start);
        if (it == table[len].end()) continue;
        const Rational& value = it->second.first;
        if (!best.none && compare_roots(numerator(value), denominator(value), len, best.p, best.q,
                                        best.length) <= 0)
          continue;
        // Recover the walk backwards, then cut out a simple cycle.
        std::vector<EdgeIndex> walk(len);
        VertexIndex x = start;
        for (std::size_t k = len; k >= 1; --k) {
          EdgeIndex e = table[k].at(x).second;
          walk[k - 1] = e;
          x = g.range(e);
        }
        std::map<VertexIndex, std::size_t> seen{{g.range(walk[0]), 0}};
        std::vector<EdgeIndex> cycle;
        for (std::size_t k = 0; k < walk.size(); ++k) {
          VertexIndex y = g.source(walk[k]);
          auto hit = seen.find(y);
          if (hit != seen.end()) {
            cycle.assign(walk.begin() + static_cast<std::ptrdiff_t>(hit->second),
                         walk.begin() + static_cast<std::ptrdiff_t>(k + 1));
            break;
          }
          seen[y] = k + 1;
        }
        Rational product = 1;
        for (EdgeIndex e : cycle) product *= weight[e];
        best.none = false;
        best.p = numerator(product);
        best.q = denominator(product);
        best.length = cycle.size();
        best.witness = cycle;
      }
    }
  }
  return best;
}

}  // namespace selfsim
