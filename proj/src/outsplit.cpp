#include "selfsim/outsplit.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

std::vector<Defect> validate_outsplit(const Graph& E, const OutSplitSpec& spec) {
  std::vector<Defect> out;
  std::set<std::string> targets;
  for (const auto& t : spec.targets)
    if (!targets.insert(t).second) out.push_back({t, "duplicate target vertex"});
  for (const auto& t : spec.targets) {
    auto it = spec.beta.find(t);
    if (it == spec.beta.end()) out.push_back({t, "beta is not defined on this target"});
    else if (!E.find_vertex(it->second)) out.push_back({t, "beta maps to an unknown vertex"});
  }
  for (const auto& [t, v] : spec.beta)
    if (!targets.count(t)) out.push_back({t, "beta is defined on an undeclared target"});
  std::set<std::string> hit;
  for (EdgeIndex e = 0; e < E.num_edges(); ++e) {
    const std::string& name = E.edge_name(e);
    auto it = spec.pi.find(name);
    if (it == spec.pi.end()) {
      out.push_back({name, "pi is not defined on this edge"});
      continue;
    }
    if (!targets.count(it->second)) {
      out.push_back({name, "pi maps to an undeclared target"});
      continue;
    }
    hit.insert(it->second);
    auto b = spec.beta.find(it->second);
    if (b != spec.beta.end() && b->second != E.vertex_name(E.source(e)))
      out.push_back({name, "s(e) differs from beta(pi(e))"});
  }
  for (const auto& [e, t] : spec.pi)
    if (!E.find_edge(e)) out.push_back({e, "pi is defined on an unknown edge"});
  for (const auto& t : spec.targets)
    if (!hit.count(t)) out.push_back({t, "pi is not surjective onto this target"});
  return out;
}

OutSplit make_outsplit(std::shared_ptr<const Graph> E, const OutSplitSpec& spec) {
  auto defects = validate_outsplit(*E, spec);
  if (!defects.empty()) throw Error(ErrorCode::SpecInvalid, defects.front().id + ": " + defects.front().message);
  OutSplit os;
  auto g = std::make_shared<Graph>(spec.targets);
  for (EdgeIndex e = 0; e < E->num_edges(); ++e) os.pi.push_back(g->vertex(spec.pi.at(E->edge_name(e))));
  for (const auto& t : spec.targets) os.beta.push_back(E->vertex(spec.beta.at(t)));
  for (VertexIndex v = 0; v < spec.targets.size(); ++v) {
    for (EdgeIndex e : E->edges_with_range(os.beta[v])) {
      EdgeIndex f = g->add_edge("(" + spec.targets[v] + "," + E->edge_name(e) + ")", v, os.pi[e]);
      os.pairs.push_back({v, e});
      os.lookup[{v, e}] = f;
    }
  }
  // edges_with_range lists edges in index order, but the loop above visits
  // them per target; sort nothing, the OS edge order is target-major.
  os.graph = std::move(g);
  os.E = std::move(E);
  return os;
}

Graph outsplit_graph(const Graph& E, const OutSplitSpec& spec) {
  return *make_outsplit(std::make_shared<Graph>(E), spec).graph;
}

OutSplitSpec source_split(const Graph& E) {
  OutSplitSpec spec;
  for (VertexIndex v = 0; v < E.num_vertices(); ++v) {
    spec.targets.push_back(E.vertex_name(v));
    spec.beta[E.vertex_name(v)] = E.vertex_name(v);
  }
  for (EdgeIndex e = 0; e < E.num_edges(); ++e) spec.pi[E.edge_name(e)] = E.vertex_name(E.source(e));
  return spec;
}

Path conjugacy_I_n(const OutSplit& os, VertexIndex v, const Path& mu) {
  if (os.beta.at(v) != mu.start) throw Error(ErrorCode::DomainMismatch, "beta(v) != r(mu)");
  Path out{v, {}};
  VertexIndex current = v;
  for (EdgeIndex e : mu.edges) {
    out.edges.push_back(os.edge(current, e));
    current = os.pi[e];
  }
  return out;
}

Path project(const OutSplit& os, const Path& p) {
  Path out{os.beta.at(p.start), {}};
  for (EdgeIndex f : p.edges) out.edges.push_back(os.pairs[f].second);
  return out;
}

EPPath conjugacy_I(const OutSplit& os, const EPPath& mu) {
  const auto& c = mu.cycle();
  const auto& s = mu.suffix();
  std::vector<EdgeIndex> cycle, suffix;
  EdgeIndex prev = c.back();
  for (EdgeIndex e : c) {
    cycle.push_back(os.edge(os.pi[prev], e));
    prev = e;
  }
  for (EdgeIndex e : s) {
    suffix.push_back(os.edge(os.pi[prev], e));
    prev = e;
  }
  return EPPath::make(*os.graph, std::move(cycle), std::move(suffix));
}

std::shared_ptr<const ActionSystem> outsplit_bundle(std::shared_ptr<const ActionSystem> sys, const OutSplit& os) {
  const Graph& E = sys->graph();
  if (&E != os.E.get() && E.num_edges() != os.E->num_edges())
    throw Error(ErrorCode::DomainMismatch, "out-split belongs to another graph");
  // The bundle formula needs a range- and source-preserving action that also
  // preserves the out-split classes pi.
  for (VertexIndex v = 0; v < E.num_vertices(); ++v) {
    for (std::int64_t k : {1, -1}) {
      Element g = sys->element(v, k);
      for (EdgeIndex e : E.edges_with_range(v)) {
        StepResult r = sys->step(g, e);
        if (E.range(r.edge) != E.range(e) || E.source(r.edge) != E.source(e))
          throw Error(ErrorCode::NotGroupBundle, "action moves the endpoints of edge " + E.edge_name(e));
        if (os.pi[r.edge] != os.pi[e])
          throw Error(ErrorCode::NotGroupBundle, "action does not preserve pi on edge " + E.edge_name(e));
      }
    }
  }
  std::vector<Modulus> moduli;
  for (VertexIndex v = 0; v < os.beta.size(); ++v) moduli.push_back(sys->modulus(os.beta[v]));
  auto split = std::make_shared<OutSplit>(os);
  return std::make_shared<ActionSystem>(os.graph, moduli, [sys, split](const Element& g, EdgeIndex f) {
    auto [v, e] = split->pairs[f];
    StepResult r = sys->step(sys->element(split->beta[v], g.exponent), e);
    return StepResult{split->edge(v, r.edge), Element{split->pi[e], r.restriction.exponent}};
  });
}

PutnamKep putnam_to_kep(const EmbeddingPair& xi) {
  const Graph& E = *xi.E;
  // Classes of E^1 under xi^0(h) ~ xi^1(h), ordered by their smallest edge index.
  std::vector<std::string> class_of(E.num_edges());
  std::vector<std::pair<EdgeIndex, std::string>> order;
  std::set<std::string> seen;
  for (EdgeIndex e = 0; e < E.num_edges(); ++e) {
    class_of[e] = xi.label[e] ? xi.H.edge_name(xi.label[e]->first) : E.edge_name(e);
    if (seen.insert(class_of[e]).second) order.push_back({e, class_of[e]});
  }
  OutSplitSpec spec;
  for (const auto& [e, name] : order) {
    spec.targets.push_back(name);
    spec.beta[name] = E.vertex_name(E.source(e));
  }
  for (EdgeIndex e = 0; e < E.num_edges(); ++e) spec.pi[E.edge_name(e)] = class_of[e];
  if (spec.targets.size() != seen.size()) throw Error(ErrorCode::InvalidPair, "class names collide");

  PutnamKep out;
  out.vertex_names = spec.targets;
  out.os = make_outsplit(xi.E, spec);
  const std::size_t n = spec.targets.size();
  out.pair.A = out.os.graph->adjacency();
  out.pair.B.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.pair.B[i][j] = std::max<std::int64_t>(0, out.pair.A[i][j] - 1);
  require_valid(out.pair);
  out.kg = build_graph(out.pair);
  for (EdgeIndex f = 0; f < out.os.pairs.size(); ++f) {
    auto [v, e] = out.os.pairs[f];
    std::int64_t m = xi.label[e] ? xi.label[e]->second : 0;
    out.kep_edge.push_back(out.kg.edge(v, out.os.pi[e], m));
  }
  return out;
}

ConjugacyReport conjugacy_check(std::shared_ptr<const ActionSystem> sys, const OutSplit& os, std::size_t depth,
                                std::size_t samples, std::uint64_t seed) {
  ConjugacyReport report;
  auto split = outsplit_bundle(sys, os);
  NucleusResult ne = stable_nucleus(*sys, standard_generators(*sys));
  NucleusResult no = stable_nucleus(*split, standard_generators(*split));
  if (ne.diverged || no.diverged) {
    report.discrepancies.push_back("nucleus computation diverged");
    return report;
  }
  const Graph& E = sys->graph();
  std::mt19937_64 rng(seed);
  const std::size_t max_cycle = std::min<std::size_t>(3, depth);
  const std::size_t max_suffix = depth > max_cycle ? depth - max_cycle : 0;
  for (std::size_t s = 0; s < samples; ++s) {
    EPPath mu = random_eppath(E, max_cycle, max_suffix, rng);
    EPPath nu;
    switch (s % 3) {
      case 0: nu = random_sibling(E, mu, rng); break;
      case 1: nu = random_eppath(E, max_cycle, max_suffix, rng); break;
      default: nu = random_sibling(E, random_eppath(E, 1, max_suffix, rng), rng); break;
    }
    EPPath imu = conjugacy_I(os, mu), inu = conjugacy_I(os, nu);
    bool lhs = ae_periodic(*sys, ne.nucleus, mu, nu);
    bool rhs = ae_periodic(*split, no.nucleus, imu, inu);
    ++report.samples;
    if (lhs) ++report.related;
    auto text = [&](const char* what) {
      return std::string(what) + " at sample " + std::to_string(s);
    };
    if (lhs != rhs) report.discrepancies.push_back(text("exact verdicts differ"));
    if (lhs) {
      if (!ae_oracle(*sys, mu.truncate(E, depth), nu.truncate(E, depth), ne.nucleus.elements))
        report.discrepancies.push_back(text("finite oracle rejects an equivalent pair"));
      if (!ae_oracle(*split, imu.truncate(*os.graph, depth), inu.truncate(*os.graph, depth), no.nucleus.elements))
        report.discrepancies.push_back(text("finite oracle rejects an equivalent out-split pair"));
    }
  }
  return report;
}

}  // namespace selfsim
