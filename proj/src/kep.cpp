#include "selfsim/kep.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

std::vector<Defect> validate_pair(const KatsuraPair& p) {
  std::vector<Defect> out;
  const std::size_t n = p.A.size();
  if (p.B.size() != n) out.push_back({"B", "B must have the same size as A"});
  for (std::size_t i = 0; i < n; ++i) {
    if (p.A[i].size() != n) out.push_back({"A[" + std::to_string(i + 1) + "]", "A must be square"});
    if (i < p.B.size() && p.B[i].size() != n)
      out.push_back({"B[" + std::to_string(i + 1) + "]", "B must be square"});
  }
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::string id = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (p.A[i][j] < 0) out.push_back({"A" + id, "A must be nonnegative"});
      if (p.A[i][j] == 0 && p.B[i][j] != 0) out.push_back({"B" + id, "B is nonzero where A is zero"});
    }
  }
  return out;
}

void require_valid(const KatsuraPair& p) {
  auto defects = validate_pair(p);
  if (!defects.empty()) throw Error(ErrorCode::InvalidPair, defects.front().id + ": " + defects.front().message);
}

bool is_01(const KatsuraPair& p) {
  for (const auto& row : p.B)
    for (auto b : row)
      if (b != 0 && b != 1) return false;
  return true;
}

std::string kep_edge_name(VertexIndex i, VertexIndex j, std::int64_t m) {
  return "e_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(m);
}

KepGraph build_graph(const KatsuraPair& p) {
  require_valid(p);
  const std::size_t n = p.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));
  auto g = std::make_shared<Graph>(names);
  KepGraph kg;
  kg.index.assign(n, std::vector<std::vector<EdgeIndex>>(n));
  for (VertexIndex i = 0; i < n; ++i) {
    for (VertexIndex j = 0; j < n; ++j) {
      for (std::int64_t m = 0; m < p.A[i][j]; ++m) {
        kg.index[i][j].push_back(g->add_edge(kep_edge_name(i, j, m), i, j));
        kg.edges.push_back({i, j, m});
      }
    }
  }
  kg.graph = std::move(g);
  return kg;
}

Division kep_division(std::int64_t k, std::int64_t A, std::int64_t B, std::int64_t m) {
  std::int64_t total = checked_add(checked_mul(k, B), m);
  std::int64_t m_hat = floor_mod(total, A);
  return {(total - m_hat) / A, m_hat};
}

StepResult kep_step(const KatsuraPair& p, const KepGraph& kg, const Element& g, EdgeIndex e) {
  const KepEdge& ke = kg.edges.at(e);
  if (ke.i != g.vertex) throw Error(ErrorCode::DomainMismatch, "a_i^k applied to an edge with another range");
  Division d = kep_division(g.exponent, p.A[ke.i][ke.j], p.B[ke.i][ke.j], ke.m);
  return {kg.edge(ke.i, ke.j, d.m_hat), Element{ke.j, d.k_hat}};
}

namespace {

// Vertex-level graph with one arrow j -> i per pair with A_ij > 0 and the given filter.
template <class Pred>
Graph pair_graph(const KatsuraPair& p, Pred keep) {
  const std::size_t n = p.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i + 1));
  Graph g(names);
  for (VertexIndex i = 0; i < n; ++i)
    for (VertexIndex j = 0; j < n; ++j)
      if (p.A[i][j] > 0 && keep(i, j)) g.add_edge(std::to_string(i) + ":" + std::to_string(j), i, j);
  return g;
}

std::pair<VertexIndex, VertexIndex> pair_of(const Graph& g, EdgeIndex e) { return {g.range(e), g.source(e)}; }

// Is there a cycle inside the component whose edge weights (from `w`) sum to > 0?
bool has_positive_cycle(const Graph& g, const SccResult& scc, std::size_t c,
                        const std::function<std::int64_t(EdgeIndex)>& w) {
  std::vector<std::int64_t> dist(g.num_vertices(), 0);
  const std::size_t n = scc.members[c].size();
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      if (scc.component[g.range(e)] != c || scc.component[g.source(e)] != c) continue;
      // Walk extension goes from range to source.
      std::int64_t cand = dist[g.range(e)] + w(e);
      if (cand > dist[g.source(e)]) {
        dist[g.source(e)] = cand;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

}  // namespace

std::vector<bool> infinite_mask(const KatsuraPair& p) {
  require_valid(p);
  const std::size_t n = p.size();
  Graph support = pair_graph(p, [&](VertexIndex i, VertexIndex j) { return p.B[i][j] != 0; });
  auto scc = strongly_connected_components(support);
  std::vector<bool> divergent(scc.members.size(), false);
  for (std::size_t c = 0; c < scc.members.size(); ++c) {
    if (!scc.nontrivial[c]) continue;
    std::set<std::int64_t> primes;
    for (EdgeIndex e = 0; e < support.num_edges(); ++e) {
      auto [i, j] = pair_of(support, e);
      if (scc.component[i] == c && scc.component[j] == c)
        for (auto q : prime_factors(p.A[i][j])) primes.insert(q);
    }
    // A_c does not divide |B_c| iff some prime has larger valuation in A_c.
    for (auto q : primes) {
      auto w = [&](EdgeIndex e) {
        auto [i, j] = pair_of(support, e);
        return static_cast<std::int64_t>(valuation(p.A[i][j], q)) -
               static_cast<std::int64_t>(valuation(p.B[i][j], q));
      };
      if (has_positive_cycle(support, scc, c, w)) {
        divergent[c] = true;
        break;
      }
    }
  }
  // v is infinite iff a divergent component is reachable from v along paths
  // (v -> s(e) for r(e) = v), i.e. v reaches it backwards along arrows.
  std::vector<bool> inf(n, false);
  std::deque<VertexIndex> queue;
  for (VertexIndex v = 0; v < n; ++v) {
    if (divergent[scc.component[v]]) {
      inf[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    VertexIndex x = queue.front();
    queue.pop_front();
    for (EdgeIndex e : support.edges_with_source(x)) {
      VertexIndex r = support.range(e);
      if (!inf[r]) {
        inf[r] = true;
        queue.push_back(r);
      }
    }
  }
  return inf;
}

std::vector<Modulus> isotropy_orders(const KatsuraPair& p) {
  auto inf = infinite_mask(p);
  const std::size_t n = p.size();
  std::vector<Modulus> o(n, 1);
  for (VertexIndex v = 0; v < n; ++v)
    if (inf[v]) o[v] = kInfinite;
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexIndex i = 0; i < n; ++i) {
      if (inf[i]) continue;
      std::int64_t acc = 1;
      for (VertexIndex j = 0; j < n; ++j) {
        if (p.B[i][j] == 0) continue;
        if (inf[j]) throw Error(ErrorCode::Precondition, "finite part is not invariant");
        std::int64_t a = checked_mul(p.A[i][j], o[j]);
        acc = lcm64(acc, a / gcd64(a, p.B[i][j]));
      }
      if (acc != o[i]) {
        o[i] = acc;
        changed = true;
      }
    }
  }
  return o;
}

KepSystem kep_system(const KatsuraPair& p) {
  KepSystem ks;
  ks.pair = p;
  ks.kg = build_graph(p);
  auto orders = isotropy_orders(p);
  KatsuraPair pair = p;
  KepGraph kg = ks.kg;
  ks.system = std::make_shared<ActionSystem>(
      ks.kg.graph, orders,
      [pair, kg](const Element& g, EdgeIndex e) { return kep_step(pair, kg, g, e); });
  return ks;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

KernelResult kernel_member(const KatsuraPair& p, VertexIndex i, std::int64_t k, std::size_t depth) {
  require_valid(p);
  if (i >= p.size()) throw Error(ErrorCode::InvalidInput, "vertex out of range");
  if (k == 0) return {Verdict::Yes, std::nullopt};
  KepGraph kg = build_graph(p);
  struct State {
    VertexIndex v;
    Rational x;  // k B_mu / A_mu
    std::vector<EdgeIndex> edges;
  };
  std::deque<State> queue{{i, Rational(k), {}}};
  std::set<std::pair<VertexIndex, Rational>> seen{{i, Rational(k)}};
  while (!queue.empty()) {
    State s = queue.front();
    queue.pop_front();
    if (s.edges.size() >= depth) continue;
    for (VertexIndex j = 0; j < p.size(); ++j) {
      if (p.A[s.v][j] == 0 || p.B[s.v][j] == 0) continue;
      Rational x = s.x * Rational(p.B[s.v][j], p.A[s.v][j]);
      std::vector<EdgeIndex> edges = s.edges;
      edges.push_back(kg.edge(s.v, j, 0));
      if (denominator(x) != 1) return {Verdict::No, make_path(*kg.graph, edges)};
      if (seen.emplace(j, x).second) queue.push_back({j, x, std::move(edges)});
    }
  }
  auto o = isotropy_orders(p);
  if (o[i] != kInfinite && k % o[i] == 0) return {Verdict::Yes, std::nullopt};
  return {Verdict::Unknown, std::nullopt};
}

Decomposition decompose(const KatsuraPair& p) {
  auto inf = infinite_mask(p);
  Decomposition d;
  for (VertexIndex v = 0; v < p.size(); ++v) (inf[v] ? d.infinite_vertices : d.finite_vertices).push_back(v);
  auto sub = [&](const std::vector<VertexIndex>& vs, Matrix& A, Matrix& B) {
    A.assign(vs.size(), std::vector<std::int64_t>(vs.size(), 0));
    B.assign(vs.size(), std::vector<std::int64_t>(vs.size(), 0));
    for (std::size_t a = 0; a < vs.size(); ++a) {
      for (std::size_t b = 0; b < vs.size(); ++b) {
        B[a][b] = p.B[vs[a]][vs[b]];
        A[a][b] = B[a][b] != 0 ? p.A[vs[a]][vs[b]] : 0;
      }
    }
  };
  sub(d.infinite_vertices, d.A_inf, d.B_inf);
  sub(d.finite_vertices, d.A_fin, d.B_fin);
  for (VertexIndex i : d.finite_vertices)
    for (VertexIndex j : d.infinite_vertices)
      if (p.B[i][j] != 0) throw Error(ErrorCode::Precondition, "finite part is not invariant");
  return d;
}

EdgeMask infinite_part_edges(const KatsuraPair& p, const KepGraph& kg, const std::vector<bool>& inf) {
  EdgeMask mask(kg.edges.size(), false);
  for (EdgeIndex e = 0; e < kg.edges.size(); ++e) mask[e] = kg.B(p, e) != 0 && inf[kg.edges[e].j];
  return mask;
}

EdgeMask finite_part_edges(const KatsuraPair& p, const KepGraph& kg, const std::vector<bool>& inf) {
  EdgeMask mask(kg.edges.size(), false);
  for (EdgeIndex e = 0; e < kg.edges.size(); ++e) mask[e] = kg.B(p, e) != 0 && !inf[kg.edges[e].i];
  return mask;
}

GeometricMean contraction_coefficient(const KatsuraPair& p) {
  KepGraph kg = build_graph(p);
  auto inf = infinite_mask(p);
  std::vector<Rational> w(kg.edges.size());
  for (EdgeIndex e = 0; e < kg.edges.size(); ++e) {
    std::int64_t b = kg.B(p, e);
    w[e] = Rational(b < 0 ? -b : b, kg.A(p, e));
  }
  return max_geometric_mean_cycle(*kg.graph, w, infinite_part_edges(p, kg, inf));
}

namespace {

// Shortest path mu inside the support with r(mu) = from and s(mu) = to.
std::optional<std::vector<EdgeIndex>> find_path(const Graph& g, const EdgeMask& support, VertexIndex from,
                                                VertexIndex to, bool nonempty) {
  if (!nonempty && from == to) return std::vector<EdgeIndex>{};
  struct Node {
    VertexIndex vertex;
    std::size_t parent;
    EdgeIndex edge;
  };
  std::vector<Node> nodes{{from, 0, 0}};
  std::set<VertexIndex> seen;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    VertexIndex x = nodes[head].vertex;
    for (EdgeIndex e : g.edges_with_range(x)) {
      if (!support[e]) continue;
      VertexIndex y = g.source(e);
      if (!seen.insert(y).second) continue;
      nodes.push_back({y, head, e});
      if (y == to) {
        std::vector<EdgeIndex> out;
        for (std::size_t k = nodes.size() - 1; k != 0; k = nodes[k].parent) out.push_back(nodes[k].edge);
        std::reverse(out.begin(), out.end());
        return out;
      }
    }
  }
  return std::nullopt;
}

RegularityResult yes(std::string reason) {
  RegularityResult r;
  r.verdict = Verdict::Yes;
  r.reason = std::move(reason);
  return r;
}

}  // namespace

RegularityResult regular_01(const KatsuraPair& p) {
  if (!is_01(p)) throw Error(ErrorCode::Precondition, "regular_01 needs B with entries in {0,1}");
  KepGraph kg = build_graph(p);
  const Graph& g = *kg.graph;
  auto inf = infinite_mask(p);

  EdgeMask ones = infinite_part_edges(p, kg, inf);
  for (EdgeIndex e = 0; e < ones.size(); ++e) ones[e] = ones[e] && kg.A(p, e) == 1;
  std::vector<Rational> unit_weight(kg.edges.size(), Rational(1));
  GeometricMean cyc = max_geometric_mean_cycle(g, unit_weight, ones);
  if (!cyc.none) {
    RegularityResult r;
    r.verdict = Verdict::No;
    r.reason = "infinite-part A=1 cycle";
    r.cycle = cyc.witness;
    return r;
  }

  EdgeMask fin = finite_part_edges(p, kg, inf);
  auto scc = strongly_connected_components(g, fin);
  for (EdgeIndex e = 0; e < kg.edges.size(); ++e) {
    if (!fin[e] || kg.A(p, e) < 2) continue;
    // Look for a nontrivial component y with an E_{A,<inf} path from y down to r(e).
    for (VertexIndex y = 0; y < g.num_vertices(); ++y) {
      if (!scc.nontrivial[scc.component[y]]) continue;
      auto connector = find_path(g, fin, y, g.range(e), false);
      if (!connector) continue;
      RegularityResult r;
      r.verdict = Verdict::No;
      r.reason = "finite-part feeding edge";
      r.cycle = *find_path(g, fin, y, y, true);
      r.connector = *connector;
      r.edge = e;
      return r;
    }
  }
  return yes("no A=1 cycle in the infinite part and no long finite-part path feeds an edge with A>=2");
}

namespace {

struct FixedPathAutomaton {
  std::vector<std::pair<VertexIndex, std::int64_t>> states;
  std::map<std::pair<VertexIndex, std::int64_t>, std::size_t> id;
  std::vector<std::vector<std::pair<std::size_t, EdgeIndex>>> arcs;
};

// Finds a cycle among nonzero states of the finite-part fixed-path automaton.
std::optional<RegularityResult> finite_part_cycle(const KatsuraPair& p, const KepGraph& kg,
                                                  const std::vector<Modulus>& o, bool& too_large) {
  const std::size_t n = p.size();
  FixedPathAutomaton a;
  std::size_t total = 0;
  for (VertexIndex v = 0; v < n; ++v)
    if (o[v] != kInfinite) total += static_cast<std::size_t>(o[v]);
  too_large = total > 2000000;
  if (too_large) return std::nullopt;
  for (VertexIndex v = 0; v < n; ++v) {
    if (o[v] == kInfinite) continue;
    for (std::int64_t k = 1; k < o[v]; ++k) {
      a.id[{v, k}] = a.states.size();
      a.states.push_back({v, k});
    }
  }
  a.arcs.resize(a.states.size());
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    auto [v, k] = a.states[s];
    for (VertexIndex j = 0; j < n; ++j) {
      if (p.A[v][j] == 0 || p.B[v][j] == 0) continue;
      std::int64_t kb = checked_mul(k, p.B[v][j]);
      if (kb % p.A[v][j] != 0) continue;
      std::int64_t t = reduce_mod(kb / p.A[v][j], o[j]);
      if (t == 0) continue;
      a.arcs[s].push_back({a.id.at({j, t}), kg.edge(v, j, 0)});
    }
  }
  // Iterative DFS cycle search.
  std::vector<int> color(a.states.size(), 0);
  std::vector<std::pair<std::size_t, EdgeIndex>> parent(a.states.size(), {0, 0});
  for (std::size_t root = 0; root < a.states.size(); ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [s, pos] = stack.back();
      if (pos < a.arcs[s].size()) {
        auto [t, e] = a.arcs[s][pos++];
        if (color[t] == 0) {
          color[t] = 1;
          parent[t] = {s, e};
          stack.push_back({t, 0});
        } else if (color[t] == 1) {
          // Cycle t -> ... -> s -> t.
          std::vector<EdgeIndex> edges{e};
          std::size_t x = s;
          while (x != t) {
            edges.push_back(parent[x].second);
            x = parent[x].first;
          }
          std::reverse(edges.begin(), edges.end());
          RegularityResult r;
          r.verdict = Verdict::No;
          r.reason = "finite-part fixed-path cycle";
          r.cycle = edges;
          r.element = Element{a.states[t].first, a.states[t].second};
          return r;
        }
      } else {
        color[s] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

RegularityResult regular_general(const KatsuraPair& p, std::int64_t k_max, std::size_t d_max) {
  KepGraph kg = build_graph(p);
  const std::size_t n = p.size();
  auto inf = infinite_mask(p);
  auto o = isotropy_orders(p);

  bool too_large = false;
  if (auto r = finite_part_cycle(p, kg, o, too_large)) return *r;
  std::string fin_reason = too_large ? "" : "finite-part automaton acyclic";

  RegularityResult inf_result;
  GeometricMean rho = contraction_coefficient(p);
  if (rho.less_than_one()) {
    inf_result = yes("infinite part contracting");
  } else {
    // Closed walks with A_c | B_c, B_c != 0, pump to arbitrarily long fixed paths.
    std::optional<RegularityResult> pump;
    std::vector<VertexIndex> walk;
    std::function<void(VertexIndex, VertexIndex, BigInt, BigInt)> dfs = [&](VertexIndex start, VertexIndex v,
                                                                              BigInt a, BigInt b) {
      if (pump) return;
      if (!walk.empty() && v == start && b % a == 0) {
        RegularityResult r;
        r.verdict = Verdict::No;
        r.reason = "pumpable cycle";
        VertexIndex x = start;
        for (VertexIndex y : walk) {
          r.cycle.push_back(kg.edge(x, y, 0));
          x = y;
        }
        r.element = Element{start, to_int64(a)};
        pump = r;
        return;
      }
      if (walk.size() >= d_max) return;
      for (VertexIndex j = 0; j < n; ++j) {
        if (p.A[v][j] == 0 || p.B[v][j] == 0 || !inf[j]) continue;
        walk.push_back(j);
        dfs(start, j, a * p.A[v][j], b * p.B[v][j]);
        walk.pop_back();
      }
    };
    for (VertexIndex v = 0; v < n && !pump; ++v)
      if (inf[v]) dfs(v, v, 1, 1);
    if (pump) return *pump;

    // Every cycle of a component loses p-adic valuation for one fixed prime p.
    Graph support = pair_graph(p, [&](VertexIndex i, VertexIndex j) { return p.B[i][j] != 0 && inf[j]; });
    auto scc = strongly_connected_components(support);
    bool all_certified = true;
    std::vector<std::pair<std::size_t, std::int64_t>> certs;
    for (std::size_t c = 0; c < scc.members.size() && all_certified; ++c) {
      if (!scc.nontrivial[c]) continue;
      std::set<std::int64_t> primes;
      for (EdgeIndex e = 0; e < support.num_edges(); ++e) {
        auto [i, j] = pair_of(support, e);
        if (scc.component[i] == c && scc.component[j] == c)
          for (auto q : prime_factors(p.A[i][j])) primes.insert(q);
      }
      const auto size = static_cast<std::int64_t>(scc.members[c].size());
      bool found = false;
      for (auto q : primes) {
        // A cycle with sum(v_q(A) - v_q(B)) <= 0 exists iff one has
        // sum(1 - (size+1)(v_q(A) - v_q(B))) > 0.
        auto w = [&](EdgeIndex e) {
          auto [i, j] = pair_of(support, e);
          std::int64_t d = static_cast<std::int64_t>(valuation(p.A[i][j], q)) -
                           static_cast<std::int64_t>(valuation(p.B[i][j], q));
          return 1 - (size + 1) * d;
        };
        if (!has_positive_cycle(support, scc, c, w)) {
          certs.push_back({c, q});
          found = true;
          break;
        }
      }
      all_certified = found;
    }
    if (all_certified) {
      inf_result = yes("prime-valuation certificate: no closed walk has A_c | B_c");
      inf_result.prime_certificates = certs;
    } else {
      // Evidence only: longest fixed path for small exponents.
      std::size_t longest = 0;
      for (VertexIndex v = 0; v < n; ++v) {
        if (!inf[v]) continue;
        for (std::int64_t k = -k_max; k <= k_max; ++k) {
          if (k == 0) continue;
          std::function<std::size_t(VertexIndex, std::int64_t, std::size_t)> go =
              [&](VertexIndex x, std::int64_t kk, std::size_t depth) -> std::size_t {
            if (depth >= d_max || kk == 0) return depth;
            std::size_t best = depth;
            for (VertexIndex j = 0; j < n; ++j) {
              if (p.A[x][j] == 0 || p.B[x][j] == 0) continue;
              std::int64_t kb = checked_mul(kk, p.B[x][j]);
              if (kb % p.A[x][j] != 0) continue;
              best = std::max(best, go(j, kb / p.A[x][j], depth + 1));
            }
            return best;
          };
          longest = std::max(longest, go(v, k, 0));
        }
      }
      RegularityResult r;
      r.verdict = Verdict::Unknown;
      r.reason = "no certificate; longest fixed path with nonunit restriction found for |k|<=" +
                 std::to_string(k_max) + ": " + std::to_string(longest) + " (search depth " +
                 std::to_string(d_max) + ")";
      return r;
    }
  }
  if (too_large) {
    RegularityResult r;
    r.verdict = Verdict::Unknown;
    r.reason = "finite-part automaton too large";
    return r;
  }
  RegularityResult r = inf_result;
  r.reason = fin_reason + "; " + inf_result.reason;
  return r;
}

bool recheck_certificate(const KatsuraPair& p, const RegularityResult& r) {
  KepGraph kg = build_graph(p);
  const Graph& g = *kg.graph;
  auto inf = infinite_mask(p);
  auto closed = [&](const std::vector<EdgeIndex>& c) {
    return !c.empty() && composable(g, c) && g.source(c.back()) == g.range(c.front());
  };
  const bool witness = r.reason == "infinite-part A=1 cycle" || r.reason == "finite-part feeding edge" ||
                       r.reason == "finite-part fixed-path cycle" || r.reason == "pumpable cycle";
  if (witness && r.verdict != Verdict::No) return false;
  if (r.reason == "infinite-part A=1 cycle") {
    EdgeMask mask = infinite_part_edges(p, kg, inf);
    if (!closed(r.cycle)) return false;
    for (EdgeIndex e : r.cycle)
      if (!mask[e] || kg.A(p, e) != 1) return false;
    return true;
  }
  if (r.reason == "finite-part feeding edge") {
    EdgeMask mask = finite_part_edges(p, kg, inf);
    if (!closed(r.cycle) || !r.edge || !mask[*r.edge] || kg.A(p, *r.edge) < 2) return false;
    std::vector<EdgeIndex> path = r.cycle;
    path.insert(path.end(), r.connector.begin(), r.connector.end());
    path.push_back(*r.edge);
    for (EdgeIndex e : path)
      if (!mask[e]) return false;
    return composable(g, path);
  }
  if (r.reason == "finite-part fixed-path cycle" || r.reason == "pumpable cycle") {
    if (!closed(r.cycle) || !r.element) return false;
    KepSystem ks = kep_system(p);
    Element x = ks.system->element(r.element->vertex, r.element->exponent);
    Path loop = make_path(g, r.cycle);
    for (int round = 0; round < 4; ++round) {
      auto [img, res] = act_on_path(*ks.system, x, loop);
      if (img != loop || res.is_unit()) return false;
      x = res;
    }
    return true;
  }
  if (r.verdict == Verdict::Yes) {
    RegularityResult again = is_01(p) ? regular_01(p) : regular_general(p);
    return again.verdict == Verdict::Yes;
  }
  return r.verdict == Verdict::Unknown;
}

std::vector<BigInt> smith_invariants(const Matrix& input) {
  const std::size_t rows = input.size();
  const std::size_t cols = rows == 0 ? 0 : input[0].size();
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = input[i][j];
  std::vector<BigInt> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Pivot: smallest nonzero absolute value in the trailing block.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) return diag;
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into row t and repeat.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

std::string AbelianGroup::str() const {
  std::string out;
  for (const auto& d : torsion) out += (out.empty() ? "" : " + ") + ("Z/" + d.str());
  if (free_rank > 0)
    out += (out.empty() ? "" : " + ") + std::string("Z") + (free_rank > 1 ? "^" + std::to_string(free_rank) : "");
  return out.empty() ? "0" : out;
}

KTheory k_theory(const KatsuraPair& p) {
  require_valid(p);
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool zero = true;
    for (auto x : p.A[i]) zero = zero && x == 0;
    if (zero) throw Error(ErrorCode::ZeroRow, "A has a zero row at vertex " + std::to_string(i + 1));
  }
  auto shifted = [&](const Matrix& m) {
    Matrix out(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] = (i == j ? 1 : 0) - m[i][j];
    return out;
  };
  auto sa = smith_invariants(shifted(p.A));
  auto sb = smith_invariants(shifted(p.B));
  auto torsion = [](const std::vector<BigInt>& d) {
    std::vector<BigInt> t;
    for (const auto& x : d)
      if (x > 1) t.push_back(x);
    return t;
  };
  KTheory k;
  k.K0.torsion = torsion(sa);
  k.K0.free_rank = (n - sa.size()) + (n - sb.size());
  k.K1.torsion = torsion(sb);
  k.K1.free_rank = (n - sb.size()) + (n - sa.size());
  return k;
}

AnalysisReport analyze(const KatsuraPair& p, std::int64_t k_max, std::size_t d_max) {
  require_valid(p);
  AnalysisReport r;
  r.rho = contraction_coefficient(p);
  r.contracting = r.rho.less_than_one();
  r.regular = is_01(p) ? regular_01(p) : regular_general(p, k_max, d_max);
  r.orders = isotropy_orders(p);
  r.decomposition = decompose(p);
  return r;
}

}  // namespace selfsim
