#include "selfsim/action.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "selfsim/error.hpp"

namespace selfsim {

ActionSystem::ActionSystem(std::shared_ptr<const Graph> graph, std::vector<Modulus> moduli, StepFn step)
    : graph_(std::move(graph)), moduli_(std::move(moduli)), step_(std::move(step)) {
  if (moduli_.size() != graph_->num_vertices())
    throw Error(ErrorCode::InvalidInput, "one modulus per vertex required");
}

Element ActionSystem::element(VertexIndex v, std::int64_t k) const {
  return Element{v, reduce_mod(k, modulus(v))};
}

Element ActionSystem::inverse(const Element& g) const { return element(g.vertex, -g.exponent); }

Element ActionSystem::multiply(const Element& g, const Element& h) const {
  if (g.vertex != h.vertex) throw Error(ErrorCode::DomainMismatch, "product of elements at different vertices");
  return element(g.vertex, checked_add(g.exponent, h.exponent));
}

StepResult ActionSystem::step(const Element& g, EdgeIndex e) const {
  if (graph_->range(e) != g.vertex)
    throw Error(ErrorCode::DomainMismatch, "element at vertex '" + graph_->vertex_name(g.vertex) +
                                               "' applied to edge '" + graph_->edge_name(e) + "'");
  StepResult r = step_(g, e);
  r.restriction = element(r.restriction.vertex, r.restriction.exponent);
  return r;
}

std::pair<Path, Element> act_on_path(const ActionSystem& sys, const Element& g, const Path& mu) {
  if (g.vertex != mu.start) throw Error(ErrorCode::DomainMismatch, "d(g) != r(mu)");
  Path out{g.vertex, {}};
  out.edges.reserve(mu.edges.size());
  Element current = g;
  for (EdgeIndex e : mu.edges) {
    StepResult r = sys.step(current, e);
    out.edges.push_back(r.edge);
    current = r.restriction;
  }
  return {out, current};
}

namespace {

std::string describe(const ActionSystem& sys, const Element& g) {
  return "a_" + sys.graph().vertex_name(g.vertex) + "^" + std::to_string(g.exponent);
}

std::string describe(const Graph& g, const Path& p) {
  if (p.edges.empty()) return g.vertex_name(p.start);
  std::string s;
  for (EdgeIndex e : p.edges) s += (s.empty() ? "" : " ") + g.edge_name(e);
  return s;
}

std::vector<Element> sample_elements(const ActionSystem& sys, VertexIndex v, std::int64_t bound) {
  std::set<Element> out;
  Modulus m = sys.modulus(v);
  if (m != kInfinite && m <= 2 * bound + 1) {
    for (std::int64_t k = 0; k < m; ++k) out.insert(Element{v, k});
  } else {
    for (std::int64_t k = -bound; k <= bound; ++k) out.insert(sys.element(v, k));
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<Violation> verify_axioms(const ActionSystem& sys, std::size_t depth, std::int64_t exponent_bound) {
  const Graph& g = sys.graph();
  std::vector<Violation> out;
  const std::size_t cap = 64;
  auto fail = [&](const char* axiom, std::string detail) {
    if (out.size() < cap) out.push_back({axiom, std::move(detail)});
  };

  for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
    auto elems = sample_elements(sys, v, exponent_bound);
    // Edge-level axioms.
    for (EdgeIndex e : g.edges_with_range(v)) {
      StepResult u = sys.step(sys.unit(v), e);
      if (u.edge != e || !u.restriction.is_unit() || u.restriction.vertex != g.source(e))
        fail("A1", "unit at " + g.vertex_name(v) + " moves edge " + g.edge_name(e));
      for (const auto& x : elems) {
        StepResult r = sys.step(x, e);
        if (g.range(r.edge) != v || r.restriction.vertex != g.source(e) || g.source(r.edge) != g.source(e))
          fail("A0", describe(sys, x) + " on " + g.edge_name(e));
        for (const auto& y : elems) {
          StepResult inner = sys.step(y, e);
          StepResult outer = sys.step(x, inner.edge);
          StepResult prod = sys.step(sys.multiply(x, y), e);
          if (prod.edge != outer.edge)
            fail("A2", describe(sys, x) + " * " + describe(sys, y) + " on " + g.edge_name(e));
        }
        Element xi = sys.inverse(x);
        StepResult back = sys.step(xi, e);
        StepResult fwd = sys.step(x, back.edge);
        if (back.restriction != sys.inverse(fwd.restriction))
          fail("A3", describe(sys, x) + " on " + g.edge_name(e));
      }
    }
    // Path-level restriction laws.
    for (std::size_t n = 1; n <= depth; ++n) {
      for (const Path& mu : enumerate_paths_from(g, v, n)) {
        auto [up, ur] = act_on_path(sys, sys.unit(v), mu);
        if (up != mu || !ur.is_unit() || ur.vertex != mu.source(g))
          fail("L3", "unit restricted along " + describe(g, mu));
        for (const auto& x : elems) {
          auto [img, res] = act_on_path(sys, x, mu);
          if (img.start != v || img.source(g) != res.vertex || res.vertex != mu.source(g))
            fail("L1", describe(sys, x) + " on " + describe(g, mu));
          for (std::size_t cut = 1; cut < n; ++cut) {
            Path left{mu.start, {mu.edges.begin(), mu.edges.begin() + static_cast<std::ptrdiff_t>(cut)}};
            Path right{g.source(mu.edges[cut - 1]),
                       {mu.edges.begin() + static_cast<std::ptrdiff_t>(cut), mu.edges.end()}};
            auto [limg, lres] = act_on_path(sys, x, left);
            auto [rimg, rres] = act_on_path(sys, lres, right);
            if (rres != res || concat(g, limg, rimg) != img)
              fail("L2", describe(sys, x) + " split on " + describe(g, mu));
          }
          for (const auto& y : elems) {
            auto [gimg, gres] = act_on_path(sys, y, mu);
            auto [himg, hres] = act_on_path(sys, x, gimg);
            auto [pimg, pres] = act_on_path(sys, sys.multiply(x, y), mu);
            if (pres != sys.multiply(hres, gres) || pimg != himg)
              fail("L4", describe(sys, x) + " * " + describe(sys, y) + " on " + describe(g, mu));
          }
          Element xi = sys.inverse(x);
          auto [bimg, bres] = act_on_path(sys, xi, mu);
          auto [fimg, fres] = act_on_path(sys, x, bimg);
          if (bres != sys.inverse(fres) || fimg != mu)
            fail("L5", describe(sys, x) + " inverse on " + describe(g, mu));
        }
      }
    }
  }
  return out;
}

bool Nucleus::contains(const Element& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

NucleusResult compute_nucleus(const ActionSystem& sys, std::vector<Element> generators, std::size_t max_iters) {
  const Graph& g = sys.graph();
  std::set<Element> start;
  for (const auto& x : generators) start.insert(sys.element(x.vertex, x.exponent));
  for (VertexIndex v = 0; v < g.num_vertices(); ++v) start.insert(sys.unit(v));
  if (max_iters == 0) max_iters = 10 * start.size();

  std::map<Element, std::size_t> id;
  std::vector<Element> nodes;
  auto intern = [&](const Element& x) {
    auto [it, fresh] = id.emplace(x, nodes.size());
    if (fresh) nodes.push_back(x);
    return std::pair{it->second, fresh};
  };
  std::vector<std::size_t> frontier;
  for (const auto& x : start) frontier.push_back(intern(x).first);

  std::vector<std::tuple<std::size_t, EdgeIndex, std::size_t>> arrows;
  NucleusResult result;
  std::size_t rounds = 0;
  while (!frontier.empty()) {
    // Depth or breadth past the cap both count as divergence.
    if (rounds++ > max_iters || nodes.size() > 1000 * max_iters) {
      result.diverged = true;
      result.closure_size = nodes.size();
      return result;
    }
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      Element x = nodes[i];
      for (EdgeIndex e : g.edges_with_range(x.vertex)) {
        auto [j, fresh] = intern(sys.step(x, e).restriction);
        arrows.emplace_back(i, e, j);
        if (fresh) next.push_back(j);
      }
    }
    frontier = std::move(next);
  }
  result.closure_size = nodes.size();

  // Restriction digraph: arrow x -> x|_e.
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nodes.size(); ++i) names.push_back(std::to_string(i));
  Graph digraph(names);
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    auto [i, e, j] = arrows[a];
    (void)e;
    digraph.add_edge(std::to_string(a), j, i);
  }
  auto scc = strongly_connected_components(digraph);
  std::vector<bool> keep(nodes.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (scc.nontrivial[scc.component[i]]) {
      keep[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (EdgeIndex a : digraph.edges_with_source(i)) {
      std::size_t j = digraph.range(a);
      if (!keep[j]) {
        keep[j] = true;
        queue.push_back(j);
      }
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (keep[i]) result.nucleus.elements.push_back(nodes[i]);
  std::sort(result.nucleus.elements.begin(), result.nucleus.elements.end());
  for (auto [i, e, j] : arrows)
    if (keep[i]) result.nucleus.restriction[{nodes[i], e}] = nodes[j];
  return result;
}

std::vector<Element> standard_generators(const ActionSystem& sys) {
  std::vector<Element> out;
  for (VertexIndex v = 0; v < sys.graph().num_vertices(); ++v) {
    if (sys.modulus(v) == 1) continue;
    out.push_back(sys.element(v, 1));
    out.push_back(sys.element(v, -1));
  }
  return out;
}

NucleusResult stable_nucleus(const ActionSystem& sys, std::vector<Element> generators, std::size_t max_iters) {
  std::set<Element> gens;
  for (const auto& x : generators) {
    gens.insert(sys.element(x.vertex, x.exponent));
    gens.insert(sys.inverse(sys.element(x.vertex, x.exponent)));
  }
  NucleusResult current = compute_nucleus(sys, {gens.begin(), gens.end()}, max_iters);
  while (!current.diverged) {
    std::set<Element> seeds(current.nucleus.elements.begin(), current.nucleus.elements.end());
    for (const auto& n : current.nucleus.elements)
      for (const auto& s : gens)
        if (s.vertex == n.vertex) seeds.insert(sys.multiply(n, s));
    NucleusResult next = compute_nucleus(sys, {seeds.begin(), seeds.end()}, max_iters);
    if (next.diverged || next.nucleus.elements == current.nucleus.elements) return next;
    current = std::move(next);
  }
  return current;
}

bool ae_oracle(const ActionSystem& sys, const Path& mu, const Path& nu, const std::vector<Element>& F) {
  if (mu.length() != nu.length()) throw Error(ErrorCode::LengthMismatch, "paths differ in length");
  const std::size_t n = mu.length();
  const Graph& g = sys.graph();
  for (std::size_t t = 1; t <= n; ++t) {
    auto first = static_cast<std::ptrdiff_t>(n - t);
    Path ms{g.range(mu.edges[n - t]), {mu.edges.begin() + first, mu.edges.end()}};
    std::vector<EdgeIndex> target(nu.edges.begin() + first, nu.edges.end());
    bool found = false;
    for (const auto& x : F) {
      if (x.vertex != ms.start) continue;
      if (act_on_path(sys, x, ms).first.edges == target) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool ae_periodic(const ActionSystem& sys, const Nucleus& F, const EPPath& mu, const EPPath& nu) {
  const Graph& g = sys.graph();
  auto restrict = [&](const Element& x, EdgeIndex e) {
    auto it = F.restriction.find({x, e});
    if (it != F.restriction.end()) return StepResult{sys.step(x, e).edge, it->second};
    StepResult r = sys.step(x, e);
    if (!F.contains(r.restriction))
      throw Error(ErrorCode::Precondition, "element set is not closed under restriction");
    return r;
  };
  const std::size_t pre = joint_preperiod(mu, nu);
  const std::size_t period = joint_period(mu, nu);
  VertexIndex base = mu.truncate(g, 0).start;
  std::vector<Element> current;
  for (const auto& x : F.elements)
    if (x.vertex == base) current.push_back(x);
  std::set<std::pair<std::vector<Element>, std::size_t>> seen;
  for (std::size_t t = 1;; ++t) {
    EdgeIndex me = mu.at(-static_cast<std::int64_t>(t));
    EdgeIndex ne = nu.at(-static_cast<std::int64_t>(t));
    std::vector<Element> next;
    for (const auto& x : F.elements) {
      if (x.vertex != g.range(me)) continue;
      StepResult r = restrict(x, me);
      if (r.edge == ne && std::binary_search(current.begin(), current.end(), r.restriction)) next.push_back(x);
    }
    if (next.empty()) return false;
    current = std::move(next);
    if (t >= pre && !seen.emplace(current, (t - pre) % period).second) return true;
  }
}

}  // namespace selfsim
