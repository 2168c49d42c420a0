// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "selfsim/embed.hpp"
#include "selfsim/fixtures.hpp"
#include "selfsim/kep.hpp"
#include "selfsim/limitspace.hpp"
#include "selfsim/outsplit.hpp"
#include "selfsim/putnam.hpp"
#include "selfsim/selftest.hpp"

using namespace selfsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) note = what;
    pass = pass && ok;
  }
};

int failures = 0;

template <class F>
void criterion(int number, const std::string& title, F body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note = e.what();
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << number << " " << title;
  if (!o.note.empty()) std::cout << " (" << o.note << ")";
  std::cout << std::endl;
}

EPPath path(const Graph& g, std::vector<std::string> cycle, std::vector<std::string> suffix = {}) {
  std::vector<EdgeIndex> c, s;
  for (const auto& n : cycle) c.push_back(g.edge(n));
  for (const auto& n : suffix) s.push_back(g.edge(n));
  return EPPath::make(g, c, s);
}

// Brute-force max of (prod |B|/A)^(1/L) over simple cycles of the infinite part.
std::string brute_rho(const KatsuraPair& p) {
  KepGraph kg = build_graph(p);
  EdgeMask mask = infinite_part_edges(p, kg, infinite_mask(p));
  for (EdgeIndex e = 0; e < mask.size(); ++e) mask[e] = mask[e] && kg.edges[e].m == 0;
  GeometricMean best;
  for (const auto& c : oracle::simple_cycles(*kg.graph, mask)) {
    BigInt num = 1, den = 1;
    for (EdgeIndex e : c) {
      num *= abs(BigInt(kg.B(p, e)));
      den *= kg.A(p, e);
    }
    if (best.none || compare_roots(num, den, c.size(), best.p, best.q, best.length) > 0) {
      best.none = false;
      best.p = num;
      best.q = den;
      best.length = c.size();
    }
  }
  return best.none ? "none" : best.str();
}

std::string rho_text(const GeometricMean& g) { return g.none ? "none" : g.str(); }

}  // namespace

int main() {
  const std::uint64_t seed = 1;
  auto examples = fixtures::analysis_examples();

  criterion(1, "contraction coefficient of the four examples: 1/2, 1, finite part only, 3/2", [&](Outcome& o) {
    const char* want[] = {"1/2", "1", "none", "3/2"};
    for (std::size_t i = 0; i < 4; ++i) {
      AnalysisReport r = analyze(examples[i].pair);
      o.require(rho_text(r.rho) == want[i], examples[i].name + " rho " + rho_text(r.rho));
      o.require(brute_rho(examples[i].pair) == want[i], examples[i].name + " brute force disagrees");
    }
    o.require(decompose(examples[2].pair).infinite_vertices.empty(), "example3 has an infinite part");
  });

  criterion(2, "verdicts (true,YES) (false,NO) (true,NO) (false,YES)", [&](Outcome& o) {
    const bool contracting[] = {true, false, true, false};
    const Verdict regular[] = {Verdict::Yes, Verdict::No, Verdict::No, Verdict::Yes};
    for (std::size_t i = 0; i < 4; ++i) {
      AnalysisReport r = analyze(examples[i].pair);
      o.require(r.contracting == contracting[i], examples[i].name + " contracting");
      o.require(r.regular.verdict == regular[i], examples[i].name + " regular " + to_string(r.regular.verdict));
      o.require(recheck_certificate(examples[i].pair, r.regular), examples[i].name + " certificate");
    }
  });

  criterion(3, "Putnam fixture gives A=(2 1; 2 1), B=(1 0; 1 0); out-split figure has 3 vertices, 7 edges",
            [&](Outcome& o) {
              PutnamKep pk = putnam_to_kep(EmbeddingPair::from_decl(fixtures::putnam_figure()));
              o.require(pk.pair.A == Matrix{{2, 1}, {2, 1}}, "A");
              o.require(pk.pair.B == Matrix{{1, 0}, {1, 0}}, "B");
              auto E = std::make_shared<Graph>(Graph::from_decl(fixtures::outsplit_graph()));
              OutSplit os = make_outsplit(E, fixtures::outsplit_spec());
              o.require(os.graph->num_vertices() == 3, "vertex count");
              o.require(os.graph->num_edges() == 7, "edge count");
            });

  criterion(4, "embedding numerics with R = 6: Omega 1/5, radii 1/1080, 1/540, 1/540 - 1/(1080*6^n), centers +-1/6^4, i/6^4",
            [&](Outcome& o) {
              Embedding emb(fixtures::embedding_example(), EmbedConfig{6, true});
              const Graph& g = emb.graph();
              EPPath o11 = path(g, {"e_1_1_0"});
              o.require(emb.omega(o11) == Rational(1, 5), "Omega");
              auto t = zeta_terms(emb.pair(), o11, emb.config());
              o.require(t.size() == 1 && t[0].scale == Rational(1, 1080), "O_11 radius");
              t = zeta_terms(emb.pair(), path(g, {"e_2_2_1"}), emb.config());
              o.require(t.size() == 1 && t[0].scale == Rational(1, 540), "O_22 radius");
              std::set<Rational> angles;
              for (int n = 1; n <= 5; ++n) {
                std::vector<std::string> suffix{"e_1_2_1"};
                for (int k = 1; k < n; ++k) suffix.push_back("e_2_2_0");
                t = zeta_terms(emb.pair(), path(g, {"e_1_1_1"}, suffix), emb.config());
                Rational want = Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n));
                o.require(t.size() == 1 && t[0].scale == want, "O_n radius n=" + std::to_string(n));
                for (int m = 0; m < 3; ++m) {
                  auto s = suffix;
                  s.push_back("e_2_1_" + std::to_string(m));
                  t = zeta_terms(emb.pair(), path(g, {"e_1_1_1"}, s), emb.config());
                  o.require(t.size() == 2 && t[1].scale == Rational(1, 1296), "center distance");
                  angles.insert(t.back().angle);
                }
              }
              o.require(angles == std::set<Rational>{0, Rational(1, 4), Rational(1, 2)}, "angle set");
            });

  criterion(5, "axioms hold to depth 4, exponent bound 4, on the examples, the Putnam fixture and their out-splits",
            [&](Outcome& o) {
              std::vector<std::pair<std::string, std::shared_ptr<const ActionSystem>>> systems;
              for (const auto& ex : examples) {
                KepSystem ks = kep_system(ex.pair);
                systems.push_back({ex.name, ks.system});
                systems.push_back({ex.name + " out-split",
                                   outsplit_bundle(ks.system, make_outsplit(ks.kg.graph, source_split(*ks.kg.graph)))});
              }
              EmbeddingPair xi = EmbeddingPair::from_decl(fixtures::putnam_figure());
              auto xs = xi_system(xi);
              systems.push_back({"putnam", xs});
              systems.push_back({"putnam out-split", outsplit_bundle(xs, putnam_to_kep(xi).os)});
              for (const auto& [name, sys] : systems) {
                auto v = verify_axioms(*sys, 4, 4);
                o.require(v.empty(), name + ": " + (v.empty() ? "" : v.front().axiom));
              }
            });

  criterion(6, "ae_equivalent, zeta_equal and the depth-10 oracle agree on 200 pairs per fixture", [&](Outcome& o) {
    std::vector<std::pair<std::string, KatsuraPair>> fx{{"odometer", fixtures::odometer()},
                                                       {"example1", fixtures::example1()},
                                                       {"embedding example", fixtures::embedding_example()},
                                                       {"putnam pair", KatsuraPair{{{2, 1}, {2, 1}}, {{1, 0}, {1, 0}}}}};
    for (const auto& [name, p] : fx) {
      LimitSpace ls(p);
      Embedding emb(p);
      KepSystem ks = kep_system(p);
      const Graph& g = *ks.kg.graph;
      auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
      o.require(!nr.diverged, name + " nucleus diverged");
      std::mt19937_64 rng(seed);
      std::size_t related = 0;
      for (std::size_t i = 0; i < 200; ++i) {
        auto [mu, nu] = sample_kep_pair(p, ks.kg, i, rng);
        bool ae = ls.ae_equivalent(mu, nu);
        bool ze = emb.zeta_equal(mu, nu);
        bool oracle = ae_oracle(*ks.system, mu.truncate(g, 10), nu.truncate(g, 10), nr.nucleus.elements);
        related += ae;
        o.require(ae == ze, name + " ae/zeta differ at " + std::to_string(i));
        o.require(!ae || oracle, name + " decider true but oracle false at " + std::to_string(i));
      }
      o.require(related > 0, name + " no related pairs sampled");
    }
  });

  criterion(7, "xi relation equals the nucleus-based ae check on 200 Putnam pairs", [&](Outcome& o) {
    auto st = putnam_agreement(200, seed);
    o.require(st.samples == 200, "sample count");
    o.require(st.failures.empty(), st.failures.empty() ? "" : st.failures.front());
    o.require(st.equivalent > 0, "no related pairs sampled");
  });

  criterion(8, "out-split conjugacy: zero discrepancies at depth 6, 200 samples, Putnam fixture and odometer",
            [&](Outcome& o) {
              EmbeddingPair xi = EmbeddingPair::from_decl(fixtures::putnam_figure());
              auto rep = conjugacy_check(xi_system(xi), putnam_to_kep(xi).os, 6, 200, seed);
              o.require(rep.samples == 200 && rep.discrepancies.empty(),
                        rep.discrepancies.empty() ? "putnam samples" : rep.discrepancies.front());
              KepSystem ks = kep_system(fixtures::odometer());
              rep = conjugacy_check(ks.system, make_outsplit(ks.kg.graph, source_split(*ks.kg.graph)), 6, 200, seed);
              o.require(rep.samples == 200 && rep.discrepancies.empty(),
                        rep.discrepancies.empty() ? "odometer samples" : rep.discrepancies.front());
            });

  criterion(9, "odometer nucleus {-1,0,1}; Putnam nucleus inside {-1,0,1} x H plus units", [&](Outcome& o) {
    KepSystem ks = kep_system(fixtures::odometer());
    auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
    std::set<std::int64_t> ex;
    for (const auto& g : nr.nucleus.elements) ex.insert(g.exponent);
    o.require(!nr.diverged && ex == std::set<std::int64_t>{-1, 0, 1}, "odometer nucleus");
    EmbeddingPair xi = EmbeddingPair::from_decl(fixtures::putnam_figure());
    auto xs = xi_system(xi);
    nr = stable_nucleus(*xs, standard_generators(*xs));
    o.require(!nr.diverged, "putnam nucleus diverged");
    for (const auto& g : nr.nucleus.elements) {
      bool in_h = xi.h_vertex(g.vertex).has_value();
      bool small = g.exponent >= -1 && g.exponent <= 1;
      o.require(in_h ? small : g.exponent == 0, "element outside the bound");
    }
  });

  criterion(10, "K-theory of A=(2), B=(1) is (Z, Z); torsion order |det(I - A)| on 100 random 3x3 pairs",
            [&](Outcome& o) {
              KTheory kt = k_theory(fixtures::odometer());
              o.require(kt.K0.str() == "Z" && kt.K1.str() == "Z", kt.K0.str() + ", " + kt.K1.str());
              std::mt19937_64 rng(seed);
              std::uniform_int_distribution<int> a(0, 3), b(-2, 2);
              for (int trial = 0; trial < 100; ++trial) {
                KatsuraPair p{Matrix(3, std::vector<std::int64_t>(3)), Matrix(3, std::vector<std::int64_t>(3))};
                for (std::size_t i = 0; i < 3; ++i) {
                  for (std::size_t j = 0; j < 3; ++j) {
                    p.A[i][j] = a(rng);
                    p.B[i][j] = p.A[i][j] ? b(rng) : 0;
                  }
                  if (p.A[i][0] + p.A[i][1] + p.A[i][2] == 0) p.A[i][i] = 1;
                }
                std::vector<std::vector<BigInt>> ia(3, std::vector<BigInt>(3));
                for (std::size_t i = 0; i < 3; ++i)
                  for (std::size_t j = 0; j < 3; ++j) ia[i][j] = (i == j ? 1 : 0) - p.A[i][j];
                BigInt d = oracle::det(ia);
                if (d == 0) continue;
                BigInt prod = 1;
                for (const auto& t : k_theory(p).K0.torsion) prod *= t;
                o.require(prod == abs(d), "trial " + std::to_string(trial));
              }
            });

  criterion(11, "depth-6 render: circle radii within one pixel, one CSV row per path", [&](Outcome& o) {
    RenderConfig rc;
    rc.depth = 6;
    rc.embed = EmbedConfig{6, true};
    RenderResult r = render(fixtures::embedding_example(), rc, "", "");
    std::string svg = svg_document(r, rc), csv = csv_document(r);
    std::regex circle_re("<circle class=\"component\"[^>]* r=\"([0-9.eE+-]+)\"");
    std::vector<double> radii;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle_re); it != std::sregex_iterator(); ++it)
      radii.push_back(std::stod((*it)[1]));
    std::vector<Rational> want{Rational(1, 1080), Rational(1, 540)};
    for (int n = 1; n <= 5; ++n) want.push_back(Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n)));
    for (const auto& w : want) {
      double px = static_cast<double>(w) * r.scale;
      bool found = std::any_of(radii.begin(), radii.end(), [&](double x) { return std::abs(x - px) <= 1.0; });
      o.require(found, "radius " + to_string(w));
    }
    BigInt paths = oracle::path_count(*build_graph(fixtures::embedding_example()).graph, 6);
    auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    o.require(!r.sampled && BigInt(rows) == paths, "rows " + std::to_string(rows) + " vs " + paths.str());
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
