#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>
#include <regex>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "selfsim/embed.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fixtures.hpp"
#include "selfsim/selftest.hpp"

using namespace selfsim;
using Float = boost::multiprecision::cpp_bin_float_100;

namespace {

EPPath path(const Graph& g, std::vector<std::string> cycle, std::vector<std::string> suffix = {}) {
  std::vector<EdgeIndex> c, s;
  for (const auto& n : cycle) c.push_back(g.edge(n));
  for (const auto& n : suffix) s.push_back(g.edge(n));
  return EPPath::make(g, c, s);
}

Float distance(const ComplexValue& a, const ComplexValue& b) {
  Float dr = Float(a.re_text) - Float(b.re_text), di = Float(a.im_text) - Float(b.im_text);
  return sqrt(dr * dr + di * di);
}

Float to_float(const Rational& x) { return Float(numerator(x)) / Float(denominator(x)); }

// Runs of constant B-type read straight off the path, positions -span..-1.
std::vector<std::pair<std::int64_t, int>> run_starts(const Embedding& emb, const EPPath& mu, std::int64_t span) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t j = -span; j <= -1; ++j) {
    int t = emb.type(mu.at(j));
    if (out.empty() || out.back().second != t) out.push_back({j, t});
  }
  return out;
}

}  // namespace

TEST_CASE("embedding constants") {
  auto c = constants(fixtures::embedding_example());
  CHECK(c.M == 3);
  CHECK(c.N == 2);
  CHECK(c.R == 9);
  CHECK(constants(fixtures::embedding_example(), EmbedConfig{6, false}).R == 6);
  CHECK(constants(fixtures::odometer()).R == 4);
  CHECK_THROWS_AS(constants(fixtures::embedding_example(), EmbedConfig{3, false}), Error);
  try {
    constants(KatsuraPair{{{1}}, {{1}}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("interval decomposition matches the run structure of the path") {
  Embedding emb(fixtures::embedding_example());
  const Graph& g = emb.graph();
  auto d = emb.decomp(path(g, {"e_1_1_0"}));
  CHECK(d.block.empty());
  REQUIRE(d.intervals.size() == 1);
  CHECK(d.intervals[0] == Interval{std::nullopt, -1, 1});
  d = emb.decomp(path(g, {"e_1_1_0"}, {"e_1_2_0", "e_2_1_1"}));
  REQUIRE(d.intervals.size() == 2);
  CHECK(d.intervals[0] == Interval{std::nullopt, -2, 1});
  CHECK(d.intervals[1] == Interval{-1, -1, 0});

  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    EPPath mu = random_eppath(g, 4, 5, rng);
    d = emb.decomp(mu);
    // Expand the description over 60 positions and compare with the runs.
    std::map<std::int64_t, int> start_type;
    for (const auto& iv : d.intervals)
      if (iv.lo) start_type[*iv.lo] = iv.type;
    const auto L = static_cast<std::int64_t>(d.period);
    for (std::int64_t r = 0; L > 0 && r < 30; ++r)
      for (const auto& iv : d.block) start_type[*iv.lo - r * L] = iv.type;
    for (std::int64_t j = -60; j <= -1; ++j) {
      bool starts = emb.type(mu.at(j - 1)) != emb.type(mu.at(j));
      bool listed = start_type.count(j) > 0;
      // Above the infinite leftmost interval every run start is listed.
      bool in_infinite = !d.intervals.empty() && !d.intervals.front().lo && j <= d.intervals.front().hi;
      if (j > -50 && !in_infinite) CHECK(starts == listed);
      if (listed) CHECK(start_type[j] == emb.type(mu.at(j)));
    }
    if (!d.intervals.front().lo) {
      for (std::int64_t j = d.intervals.front().hi; j > d.intervals.front().hi - 40; --j)
        CHECK(emb.type(mu.at(j)) == d.intervals.front().type);
    }
  }
  Path prefix = path(g, {"e_1_1_0"}, {"e_1_2_0", "e_2_1_1"}).truncate(g, 4);
  d = emb.decomp(prefix);
  auto runs = run_starts(emb, path(g, {"e_1_1_0"}, {"e_1_2_0", "e_2_1_1"}), 4);
  REQUIRE(d.intervals.size() == runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) CHECK(*d.intervals[i].lo == runs[i].first);
}

TEST_CASE("radius and angle values") {
  Embedding emb(fixtures::embedding_example(), EmbedConfig{6, true});
  const Graph& g = emb.graph();
  CHECK(emb.omega(path(g, {"e_1_1_0"})) == Rational(1, 5));
  auto t = emb.terms(path(g, {"e_1_1_0"}));
  REQUIRE(t.size() == 1);
  CHECK(t[0].scale == Rational(1, 1080));
  CHECK(t[0].angle == 0);
  t = emb.terms(path(g, {"e_2_2_1"}));
  REQUIRE(t.size() == 1);
  CHECK(t[0].scale == Rational(1, 540));
  for (int n = 1; n <= 5; ++n) {
    std::vector<std::string> suffix{"e_1_2_1"};
    for (int k = 1; k < n; ++k) suffix.push_back("e_2_2_0");
    t = emb.terms(path(g, {"e_1_1_1"}, suffix));
    REQUIRE(t.size() == 1);
    CHECK(t[0].scale == Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n)));
  }
  std::set<Rational> angles;
  for (int m = 0; m < 3; ++m) {
    t = emb.terms(path(g, {"e_1_1_1"}, {"e_1_2_1", "e_2_1_" + std::to_string(m)}));
    REQUIRE(t.size() == 2);
    CHECK(t[1].scale == Rational(1, 1296));
    angles.insert(t[1].angle);
  }
  CHECK(angles == std::set<Rational>{0, Rational(1, 4), Rational(1, 2)});
  // Keeping the range term: one edge e_1_1_0 gives 1/6 + 1/36.
  Embedding keep(fixtures::embedding_example(), EmbedConfig{6, false});
  CHECK(keep.omega(std::vector<EdgeIndex>{g.edge("e_1_1_0")}) == Rational(7, 36));
}

TEST_CASE("omega and theta of tails agree with partial sums") {
  Embedding emb(fixtures::embedding_example());
  const KatsuraPair& p = emb.pair();
  const KepGraph& kg = emb.kep_graph();
  const Graph& g = emb.graph();
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    EPPath mu = random_eppath(g, 3, 4, rng);
    Rational partial = 0;
    BigInt power = 1;
    for (std::int64_t j = -1; j >= -40; --j) {
      power *= 9;
      partial += Rational(BigInt(kg.edges[mu.at(j)].j + 1), power);
    }
    Rational gap = emb.omega(mu) - partial;
    CHECK(gap >= 0);
    CHECK(gap < Rational(1, BigInt(1) << 100));
    for (int type : {0, 1}) {
      Rational th = oracle::digit_partial_sum(p, kg, mu, type == 0 ? 1 : 0, 80);
      Rational diff = emb.theta(mu, type) - frac(th);
      if (diff < 0) diff = -diff;
      CHECK((diff < Rational(1, BigInt(1) << 50) || 1 - diff < Rational(1, BigInt(1) << 50)));
    }
  }
}

TEST_CASE("truncations converge within the tail bound") {
  for (auto cfg : {EmbedConfig{}, EmbedConfig{6, true}, EmbedConfig{6, false}}) {
    for (auto p : {fixtures::embedding_example(), fixtures::odometer(), fixtures::example1()}) {
      Embedding emb(p, cfg);
      const Graph& g = emb.graph();
      std::mt19937_64 rng(14);
      for (int t = 0; t < 100; ++t) {
        EPPath mu = random_eppath(g, 3, 5, rng);
        std::size_t k = 1 + t % 8;
        Path pk = mu.truncate(g, k);
        Float bound = to_float(emb.tail_bound(pk));
        auto zk = evaluate(emb.terms(pk), 320);
        auto zk1 = evaluate(emb.terms(mu.truncate(g, k + 1)), 320);
        auto z = evaluate(emb.terms(mu), 320);
        CHECK(distance(zk, zk1) <= bound);
        CHECK(distance(zk, z) <= bound);
      }
    }
  }
}

TEST_CASE("type-0 paths are embedded injectively") {
  KatsuraPair p{{{3}}, {{0}}};
  Embedding emb(p);
  const Graph& g = emb.graph();
  std::vector<ComplexValue> zs;
  auto prefixes = enumerate_paths(g, 3);
  for (const auto& pr : prefixes) zs.push_back(evaluate(emb.terms(pr), 256));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j) CHECK(distance(zs[i], zs[j]) > Float("1e-12"));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    EPPath a = random_eppath(g, 3, 3, rng), b = random_eppath(g, 3, 3, rng);
    CHECK(emb.zeta_equal(a, b) == (a == b));
    if (a != b) CHECK(distance(evaluate(emb.terms(a), 256), evaluate(emb.terms(b), 256)) > Float("1e-40"));
  }
}

TEST_CASE("zeta equality agrees with asymptotic equivalence") {
  for (auto p : {fixtures::odometer(), fixtures::example1(), fixtures::embedding_example()}) {
    auto st = ae_agreement(p, 200, 10, 4);
    CHECK(st.samples == 200);
    CHECK(st.failures.empty());
    CHECK(st.equivalent > 0);
    Embedding emb(p);
    KepGraph kg = build_graph(p);
    std::mt19937_64 rng(4);
    for (std::size_t i = 0; i < 100; ++i) {
      auto [mu, nu] = sample_kep_pair(p, kg, i, rng);
      Float d = distance(evaluate(emb.terms(mu), 256), evaluate(emb.terms(nu), 256));
      if (emb.zeta_equal(mu, nu)) CHECK(d < Float("1e-60"));
      else CHECK(d > Float("1e-40"));
    }
  }
  CHECK_THROWS_AS(zeta_equal(fixtures::example2(), EPPath(), EPPath()), Error);
}

TEST_CASE("renderer output") {
  RenderConfig rc;
  rc.depth = 3;
  rc.threads = 2;
  RenderResult r = render(fixtures::odometer(), rc, "", "");
  CHECK(r.points.size() == 8);
  CHECK_FALSE(r.sampled);
  std::string csv = csv_document(r);
  CHECK(csv.rfind("path_id,re,im,kind\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  std::string svg = svg_document(r, rc);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("data-scale") != std::string::npos);
  CHECK(svg.find("no injectivity guarantee") == std::string::npos);

  rc.depth = 4;
  r = render(fixtures::embedding_example(), rc, "", "");
  CHECK(BigInt(r.points.size()) == oracle::path_count(build_graph(fixtures::embedding_example()).graph.operator*(), 4));

  rc.depth = 2;
  r = render(KatsuraPair{{{3}}, {{2}}}, rc, "", "");
  CHECK_FALSE(r.injectivity_guaranteed);
  CHECK(svg_document(r, rc).find("no injectivity guarantee") != std::string::npos);

  rc.depth = 5;
  rc.sample_threshold = 100;
  r = render(fixtures::embedding_example(), rc, "", "");
  CHECK(r.sampled);
  CHECK(r.points.size() == 100);
}

TEST_CASE("rendered circle radii are within a pixel of the exact radii") {
  RenderConfig rc;
  rc.embed = EmbedConfig{6, true};
  RenderResult r = render(fixtures::embedding_example(), rc, "", "");
  std::string svg = svg_document(r, rc);
  std::regex circle_re("<circle class=\"component\"[^>]* r=\"([0-9.eE+-]+)\"");
  std::vector<double> radii;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle_re); it != std::sregex_iterator(); ++it)
    radii.push_back(std::stod((*it)[1]));
  std::vector<Rational> want{Rational(1, 1080), Rational(1, 540)};
  for (int n = 1; n <= 5; ++n) want.push_back(Rational(1, 540) - Rational(1, 1080) / Rational(ipow(6, n)));
  for (const auto& w : want) {
    double px = static_cast<double>(w) * r.scale;
    bool found = false;
    for (double x : radii) found = found || std::abs(x - px) <= 1.0;
    CHECK(found);
  }
}
