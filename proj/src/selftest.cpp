#include "selfsim/selftest.hpp"

#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "selfsim/embed.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fixtures.hpp"
#include "selfsim/limitspace.hpp"
#include "selfsim/outsplit.hpp"
#include "selfsim/putnam.hpp"

namespace selfsim {

namespace {

std::optional<std::pair<EPPath, EPPath>> carry_twin(const KatsuraPair& p, const KepGraph& kg, const EPPath& mu) {
  const Graph& g = *kg.graph;
  auto end = type1_tail_end(p, kg, mu);
  if (!end) return std::nullopt;
  bool expanding = false;
  for (EdgeIndex e : mu.cycle()) expanding = expanding || kg.A(p, e) >= 2;
  if (!expanding) return std::nullopt;
  auto with_digit = [&](EdgeIndex e, std::int64_t m) { return kg.edge(kg.edges[e].i, kg.edges[e].j, m); };
  auto top = [&](EdgeIndex e) { return with_digit(e, kg.A(p, e) - 1); };
  std::vector<EdgeIndex> c0, c1, s0 = mu.suffix(), s1 = mu.suffix();
  for (EdgeIndex e : mu.cycle()) {
    c0.push_back(with_digit(e, 0));
    c1.push_back(top(e));
  }
  // Suffix indices 0..last lie in the infinite B = 1 interval.
  const auto last = static_cast<std::int64_t>(s0.size()) + *end;
  std::int64_t lead = -1;
  for (std::int64_t i = 0; i <= last; ++i)
    if (kg.edges[s0[static_cast<std::size_t>(i)]].m != 0) {
      lead = i;
      break;
    }
  const auto stop = lead < 0 ? last + 1 : lead;
  for (std::int64_t i = 0; i < stop; ++i) s1[static_cast<std::size_t>(i)] = top(s1[static_cast<std::size_t>(i)]);
  if (lead >= 0) {
    EdgeIndex e = s1[static_cast<std::size_t>(lead)];
    s1[static_cast<std::size_t>(lead)] = with_digit(e, kg.edges[e].m - 1);
  }
  return std::make_pair(EPPath::make(g, c0, s0), EPPath::make(g, c1, s1));
}

}  // namespace

std::pair<EPPath, EPPath> sample_kep_pair(const KatsuraPair& p, const KepGraph& kg, std::size_t index,
                                          std::mt19937_64& rng) {
  const Graph& g = *kg.graph;
  EPPath mu = random_eppath(g, 3, 4, rng);
  switch (index % 4) {
    case 0:
      for (int attempt = 0; attempt < 64; ++attempt) {
        if (auto twin = carry_twin(p, kg, mu)) return *twin;
        mu = random_eppath(g, 3, 4, rng);
      }
      return {mu, random_sibling(g, mu, rng)};
    case 1: return {mu, random_sibling(g, mu, rng)};
    case 2: return {mu, random_eppath(g, 3, 4, rng)};
    default: {
      // Same edges right of a random point, random digits left of it.
      std::vector<EdgeIndex> c = mu.cycle(), s = mu.suffix();
      for (auto& e : c) e = parallel_edge(g, e, rng);
      for (std::size_t i = 0; i < s.size() / 2; ++i) s[i] = parallel_edge(g, s[i], rng);
      return {mu, EPPath::make(g, c, s)};
    }
  }
}

EquivalenceStats ae_agreement(const KatsuraPair& p, std::size_t samples, std::size_t depth, std::uint64_t seed) {
  EquivalenceStats st;
  Embedding emb(p);
  const LimitSpace& ls = emb.limit_space();
  KepSystem ks = kep_system(p);
  NucleusResult nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
  if (nr.diverged) {
    st.failures.push_back("nucleus diverged");
    return st;
  }
  const Graph& g = ls.graph();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    auto [mu, nu] = sample_kep_pair(p, ks.kg, i, rng);
    bool ae = ls.ae_equivalent(mu, nu);
    bool ze = emb.zeta_equal(mu, nu);
    bool ce = ls.component_equivalent(mu, nu);
    bool oracle = ae_oracle(*ks.system, mu.truncate(g, depth), nu.truncate(g, depth), nr.nucleus.elements);
    ++st.samples;
    if (ae) ++st.equivalent;
    std::string where = " at sample " + std::to_string(i);
    if (ae != ze) st.failures.push_back("ae and zeta disagree" + where);
    if (ae && !oracle) st.failures.push_back("decider true, oracle false" + where);
    if (ae && !ce) st.failures.push_back("ae without component equivalence" + where);
  }
  return st;
}

EquivalenceStats putnam_agreement(std::size_t samples, std::uint64_t seed) {
  EquivalenceStats st;
  EmbeddingPair xi = EmbeddingPair::from_decl(fixtures::putnam_figure());
  auto sys = xi_system(xi);
  NucleusResult nr = stable_nucleus(*sys, standard_generators(*sys));
  if (nr.diverged) {
    st.failures.push_back("nucleus diverged");
    return st;
  }
  const Graph& E = *xi.E;
  // Pairs drawn on the Katsura side are carried back through the out-split so
  // that carry twins show up.
  PutnamKep pk = putnam_to_kep(xi);
  std::vector<EdgeIndex> to_e(pk.kg.graph->num_edges());
  for (EdgeIndex f = 0; f < pk.kep_edge.size(); ++f) to_e[pk.kep_edge[f]] = pk.os.pairs[f].second;
  auto back = [&](const EPPath& x) {
    std::vector<EdgeIndex> c, s;
    for (EdgeIndex e : x.cycle()) c.push_back(to_e[e]);
    for (EdgeIndex e : x.suffix()) s.push_back(to_e[e]);
    return EPPath::make(E, c, s);
  };
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    EPPath mu, nu;
    if (i % 2) {
      auto [a, b] = sample_kep_pair(pk.pair, pk.kg, i / 2, rng);
      mu = back(a);
      nu = back(b);
    } else {
      mu = random_eppath(E, 3, 4, rng);
      nu = i % 4 ? random_eppath(E, 3, 4, rng) : random_sibling(E, mu, rng);
    }
    bool a = xi_equivalent(xi, mu, nu);
    bool b = ae_periodic(*sys, nr.nucleus, mu, nu);
    ++st.samples;
    if (b) ++st.equivalent;
    if (a != b) st.failures.push_back("verdicts differ at sample " + std::to_string(i));
  }
  return st;
}

namespace {

struct Suite {
  std::vector<Check> checks;
  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back(Check{std::move(name), pass, std::move(detail)});
  }
  template <class F>
  void run(const std::string& name, F f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, false, e.what());
    }
  }
};

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : "; ") + x;
  return s.substr(0, 400);
}

}  // namespace

std::vector<Check> selftest(std::uint64_t seed) {
  Suite s;
  using namespace fixtures;

  s.run("rho and verdicts", [&] {
    const char* rho[] = {"1/2", "1", "none", "3/2"};
    const bool contracting[] = {true, false, true, false};
    const Verdict regular[] = {Verdict::Yes, Verdict::No, Verdict::No, Verdict::Yes};
    auto ex = analysis_examples();
    for (std::size_t i = 0; i < ex.size(); ++i) {
      AnalysisReport r = analyze(ex[i].pair);
      std::string got = r.rho.none ? "none" : r.rho.str();
      s.add(ex[i].name + " rho = " + rho[i], got == rho[i], got);
      s.add(ex[i].name + " contracting/regular", r.contracting == contracting[i] && r.regular.verdict == regular[i],
            std::string(r.contracting ? "true" : "false") + "/" + to_string(r.regular.verdict));
      if (r.regular.verdict != Verdict::Unknown)
        s.add(ex[i].name + " regularity certificate rechecks", recheck_certificate(ex[i].pair, r.regular));
    }
    AnalysisReport r3 = analyze(example3());
    s.add("example3 infinite part is empty", r3.decomposition.infinite_vertices.empty());
  });

  s.run("putnam to kep", [&] {
    PutnamKep pk = putnam_to_kep(EmbeddingPair::from_decl(putnam_figure()));
    s.add("putnam fixture gives A = [[2,1],[2,1]], B = [[1,0],[1,0]]",
          pk.pair.A == Matrix{{2, 1}, {2, 1}} && pk.pair.B == Matrix{{1, 0}, {1, 0}});
    auto E = std::make_shared<Graph>(Graph::from_decl(outsplit_graph()));
    OutSplit os = make_outsplit(E, outsplit_spec());
    s.add("out-split figure has 3 vertices and 7 edges",
          os.graph->num_vertices() == 3 && os.graph->num_edges() == 7);
  });

  s.run("embedding numerics", [&] {
    Embedding emb(embedding_example(), EmbedConfig{6, true});
    const Graph& g = emb.graph();
    auto e = [&](const char* n) { return g.edge(n); };
    EPPath o11 = EPPath::make(g, {e("e_1_1_0")}, {});
    s.add("O_11 omega = 1/5", emb.omega(o11) == Rational(1, 5));
    auto t = emb.terms(o11);
    s.add("O_11 radius 1/1080", t.size() == 1 && t[0].scale == Rational(1, 1080));
    t = emb.terms(EPPath::make(g, {e("e_2_2_1")}, {}));
    s.add("O_22 radius 1/540", t.size() == 1 && t[0].scale == Rational(1, 540));
    bool ok = true, centers = true;
    std::set<Rational> angles;
    for (int n = 1; n <= 5; ++n) {
      std::vector<EdgeIndex> suffix{e("e_1_2_1")};
      for (int k = 1; k < n; ++k) suffix.push_back(e("e_2_2_0"));
      EPPath mu = EPPath::make(g, {e("e_1_1_1")}, suffix);
      Rational r = Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n));
      t = emb.terms(mu);
      ok = ok && t.size() == 1 && t[0].scale == r && emb.omega(mu) == (2 - Rational(1) / Rational(ipow(6, n))) / 5;
      for (int m = 0; m < 3; ++m) {
        auto sp = suffix;
        sp.push_back(g.edge("e_2_1_" + std::to_string(m)));
        t = emb.terms(EPPath::make(g, {e("e_1_1_1")}, sp));
        centers = centers && t.size() == 2 && t[1].scale == Rational(1, 1296) && t[0].scale == r / 216;
        angles.insert(t.back().angle);
      }
    }
    s.add("O_n radii 1/540 - 1/(1080*6^n), n = 1..5", ok);
    s.add("P circle centers at distance 1/6^4", centers);
    s.add("P angles {0, 1/4, 1/2}", angles == std::set<Rational>{0, Rational(1, 4), Rational(1, 2)});
    Embedding def(embedding_example());
    s.add("default R for the embedding example is 9", def.constants().R == 9 && def.constants().M == 3);
    t = def.terms(EPPath::make(def.graph(), {def.graph().edge("e_1_1_1")},
                               {def.graph().edge("e_1_2_0"), def.graph().edge("e_2_1_0")}));
    s.add("range term kept by default", Embedding(embedding_example(), EmbedConfig{6, false})
                                                .terms(EPPath::make(g, {e("e_1_1_1")}, {e("e_1_2_0"), e("e_2_1_0")}))
                                                .back()
                                                .scale == Rational(1, 972));
  });

  s.run("axioms", [&] {
    std::vector<std::pair<std::string, std::shared_ptr<const ActionSystem>>> systems;
    for (const auto& ex : analysis_examples()) {
      KepSystem ks = kep_system(ex.pair);
      systems.push_back({ex.name, ks.system});
      systems.push_back({ex.name + " out-split", outsplit_bundle(ks.system, make_outsplit(ks.kg.graph, source_split(*ks.kg.graph)))});
    }
    EmbeddingPair xi = EmbeddingPair::from_decl(putnam_figure());
    auto xs = xi_system(xi);
    systems.push_back({"putnam", xs});
    systems.push_back({"putnam out-split", outsplit_bundle(xs, putnam_to_kep(xi).os)});
    for (const auto& [name, sys] : systems) {
      auto v = verify_axioms(*sys, 4, 4);
      s.add("axioms hold on " + name, v.empty(), v.empty() ? "" : v.front().axiom + ": " + v.front().detail);
    }
  });

  s.run("ae agreement", [&] {
    std::vector<std::pair<std::string, KatsuraPair>> fx{{"odometer", odometer()},
                                                       {"example1", example1()},
                                                       {"embedding example", embedding_example()},
                                                       {"putnam kep", KatsuraPair{{{2, 1}, {2, 1}}, {{1, 0}, {1, 0}}}}};
    for (const auto& [name, p] : fx) {
      auto st = ae_agreement(p, 200, 10, seed);
      s.add("ae, zeta and oracle agree on " + name, st.failures.empty() && st.samples == 200,
            std::to_string(st.equivalent) + " equivalent; " + join(st.failures));
    }
  });

  s.run("putnam theorem", [&] {
    auto st = putnam_agreement(200, seed);
    s.add("xi relation equals ae on the putnam fixture", st.failures.empty(),
          std::to_string(st.equivalent) + " equivalent; " + join(st.failures));
  });

  s.run("conjugacy", [&] {
    EmbeddingPair xi = EmbeddingPair::from_decl(putnam_figure());
    auto rep = conjugacy_check(xi_system(xi), putnam_to_kep(xi).os, 6, 200, seed);
    s.add("out-split conjugacy on the putnam fixture", rep.discrepancies.empty() && rep.samples == 200,
          join(rep.discrepancies));
    KepSystem ks = kep_system(odometer());
    rep = conjugacy_check(ks.system, make_outsplit(ks.kg.graph, source_split(*ks.kg.graph)), 6, 200, seed);
    s.add("out-split conjugacy on the odometer", rep.discrepancies.empty() && rep.samples == 200,
          join(rep.discrepancies));
  });

  s.run("nucleus", [&] {
    KepSystem ks = kep_system(odometer());
    auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
    std::set<std::int64_t> ex;
    for (const auto& g : nr.nucleus.elements) ex.insert(g.exponent);
    s.add("odometer nucleus is {-1,0,1}", !nr.diverged && ex == std::set<std::int64_t>{-1, 0, 1});
    EmbeddingPair xi = EmbeddingPair::from_decl(putnam_figure());
    auto xs = xi_system(xi);
    nr = stable_nucleus(*xs, standard_generators(*xs));
    bool inside = !nr.diverged;
    for (const auto& g : nr.nucleus.elements) {
      bool in_h = xi.h_vertex(g.vertex).has_value();
      std::int64_t k = g.exponent;
      Modulus m = xs->modulus(g.vertex);
      bool small = k == 0 || k == 1 || k == -1 || (m != kInfinite && k == m - 1);
      inside = inside && (in_h ? small : k == 0);
    }
    s.add("putnam nucleus inside {-1,0,1} x H", inside);
  });

  s.run("k-theory", [&] {
    KTheory kt = k_theory(odometer());
    s.add("odometer K-theory (Z, Z)", kt.K0.str() == "Z" && kt.K1.str() == "Z", kt.K0.str() + ", " + kt.K1.str());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> a_entry(0, 3), b_entry(-2, 2);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      KatsuraPair p{Matrix(3, std::vector<std::int64_t>(3)), Matrix(3, std::vector<std::int64_t>(3))};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          p.A[i][j] = a_entry(rng);
          p.B[i][j] = p.A[i][j] ? b_entry(rng) : 0;
        }
        if (p.A[i][0] + p.A[i][1] + p.A[i][2] == 0) p.A[i][i] = 1;
      }
      Matrix ia = p.A;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ia[i][j] = (i == j) - p.A[i][j];
      BigInt det = BigInt(ia[0][0]) * (ia[1][1] * ia[2][2] - ia[1][2] * ia[2][1]) -
                   BigInt(ia[0][1]) * (ia[1][0] * ia[2][2] - ia[1][2] * ia[2][0]) +
                   BigInt(ia[0][2]) * (ia[1][0] * ia[2][1] - ia[1][1] * ia[2][0]);
      if (det == 0) continue;
      BigInt prod = 1;
      for (const auto& t : k_theory(p).K0.torsion) prod *= t;
      ok = ok && prod == abs(det);
    }
    s.add("torsion of K0 has order |det(I - A)|", ok);
  });

  s.run("limit space", [&] {
    LimitSpace ls(embedding_example());
    const Graph& g = ls.graph();
    auto c = ls.classify(EPPath::make(g, {g.edge("e_1_1_0")}, {}));
    s.add("O_11 component is a circle with exponent 2",
          c.kind == ComponentClass::Kind::Circle && c.dynamics_exponent == 2 && c.case_number == 2);
    c = ls.classify(EPPath::make(g, {g.edge("e_1_1_0")}, {g.edge("e_1_2_0"), g.edge("e_2_1_1")}));
    s.add("P component has K = 1 and a circle tail", c.kind == ComponentClass::Kind::Circle && c.K == 1u);
    LimitSpace od(odometer());
    const Graph& og = od.graph();
    s.add("odometer carry tails are equivalent",
          od.ae_equivalent(EPPath::make(og, {og.edge("e_1_1_1")}, {}), EPPath::make(og, {og.edge("e_1_1_0")}, {})));
  });

  s.run("renderer", [&] {
    RenderConfig rc;
    rc.embed = EmbedConfig{6, true};
    RenderResult r = render(embedding_example(), rc, "", "");
    std::string svg = svg_document(r, rc);
    std::string csv = csv_document(r);
    std::vector<double> radii;
    std::regex circle_re("<circle class=\"component\"[^>]* r=\"([0-9.eE+-]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle_re); it != std::sregex_iterator(); ++it)
      radii.push_back(std::stod((*it)[1]));
    std::vector<Rational> want{Rational(1, 1080), Rational(1, 540)};
    for (int n = 1; n <= 5; ++n) want.push_back(Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n)));
    bool ok = true;
    for (const auto& w : want) {
      double px = static_cast<double>(w) * r.scale;
      bool found = false;
      for (double x : radii) found = found || std::abs(x - px) <= 1.0;
      ok = ok && found;
    }
    s.add("rendered circle radii match", ok);
    std::size_t rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) - 1;
    s.add("one CSV row per depth-6 path", rows == enumerate_paths(Embedding(embedding_example()).graph(), 6).size(),
          std::to_string(rows));
  });

  return s.checks;
}

}  // namespace selfsim
