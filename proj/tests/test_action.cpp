#include <random>
#include <set>

#include "doctest.h"
#include "selfsim/action.hpp"
#include "selfsim/error.hpp"
#include "selfsim/fixtures.hpp"
#include "selfsim/kep.hpp"

using namespace selfsim;

namespace {

std::set<std::int64_t> exponents(const Nucleus& n) {
  std::set<std::int64_t> out;
  for (const auto& g : n.elements) out.insert(g.exponent);
  return out;
}

}  // namespace

TEST_CASE("group operations respect the modulus") {
  auto g = std::make_shared<Graph>(std::vector<std::string>{"a", "b"});
  ActionSystem sys(g, {5, kInfinite}, [](const Element& x, EdgeIndex e) { return StepResult{e, x}; });
  CHECK(sys.element(0, 7).exponent == 2);
  CHECK(sys.element(0, -1).exponent == 4);
  CHECK(sys.element(1, -9).exponent == -9);
  CHECK(sys.inverse(sys.element(0, 2)) == sys.element(0, 3));
  CHECK(sys.multiply(sys.element(0, 3), sys.element(0, 4)) == sys.element(0, 2));
  CHECK_THROWS_AS(sys.multiply(sys.element(0, 1), sys.element(1, 1)), Error);
}

TEST_CASE("odometer acts as adding one with carry") {
  KepSystem ks = kep_system(fixtures::odometer());
  const Graph& g = *ks.kg.graph;
  EdgeIndex zero = g.edge("e_1_1_0"), one = g.edge("e_1_1_1");
  Element a = ks.system->element(0, 1);
  auto [img, res] = act_on_path(*ks.system, a, make_path(g, {one, one, one}));
  CHECK(img.edges == std::vector<EdgeIndex>{zero, zero, zero});
  CHECK(res == a);
  // a is transitive on each level, and a^(2^n) fixes level n.
  for (std::size_t n = 1; n <= 6; ++n) {
    Path p = make_path(g, std::vector<EdgeIndex>(n, zero));
    std::set<Path> orbit;
    Path cur = p;
    for (std::size_t t = 0; t < (std::size_t(1) << n); ++t) {
      orbit.insert(cur);
      cur = act_on_path(*ks.system, a, cur).first;
    }
    CHECK(cur == p);
    CHECK(orbit.size() == (std::size_t(1) << n));
  }
}

TEST_CASE("axioms hold on KEP systems and fail on a broken step") {
  for (const auto& ex : fixtures::analysis_examples()) {
    KepSystem ks = kep_system(ex.pair);
    CHECK(verify_axioms(*ks.system, 4, 4).empty());
  }
  KepSystem od = kep_system(fixtures::odometer());
  ActionSystem broken(od.kg.graph, {kInfinite}, [](const Element& g, EdgeIndex e) {
    return StepResult{e, Element{g.vertex, g.exponent == 0 ? 0 : 1}};
  });
  CHECK_FALSE(verify_axioms(broken, 2, 3).empty());
  CHECK_THROWS_AS(od.system->step(Element{0, 1}, 99), std::exception);
}

TEST_CASE("odometer nucleus") {
  KepSystem ks = kep_system(fixtures::odometer());
  auto nr = compute_nucleus(*ks.system, standard_generators(*ks.system));
  REQUIRE_FALSE(nr.diverged);
  CHECK(exponents(nr.nucleus) == std::set<std::int64_t>{-1, 0, 1});
  CHECK(nr.nucleus.contains(Element{0, -1}));
  CHECK_FALSE(nr.nucleus.contains(Element{0, 2}));
}

TEST_CASE("nucleus is closed under restriction and every element recurs") {
  for (auto p : {fixtures::example1(), fixtures::embedding_example(), fixtures::odometer()}) {
    KepSystem ks = kep_system(p);
    auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
    REQUIRE_FALSE(nr.diverged);
    const Graph& g = *ks.kg.graph;
    for (const auto& x : nr.nucleus.elements) {
      for (EdgeIndex e : g.edges_with_range(x.vertex)) CHECK(nr.nucleus.contains(ks.system->step(x, e).restriction));
      // Reachable from itself through restrictions of bounded length.
      std::set<Element> frontier{x}, seen;
      bool back = false;
      for (std::size_t d = 0; d < 2 * nr.nucleus.elements.size() + 2 && !back; ++d) {
        std::set<Element> next;
        for (const auto& y : frontier)
          for (EdgeIndex e : g.edges_with_range(y.vertex)) {
            Element z = ks.system->step(y, e).restriction;
            back = back || z == x;
            if (seen.insert(z).second) next.insert(z);
          }
        frontier = next;
      }
      CHECK(back);
    }
  }
}

TEST_CASE("growing restrictions are reported as divergence") {
  KepSystem ks = kep_system(fixtures::example4());
  auto nr = compute_nucleus(*ks.system, standard_generators(*ks.system), 50);
  CHECK(nr.diverged);
}

TEST_CASE("finite oracle") {
  KepSystem ks = kep_system(fixtures::odometer());
  const Graph& g = *ks.kg.graph;
  EdgeIndex zero = g.edge("e_1_1_0"), one = g.edge("e_1_1_1");
  auto nr = compute_nucleus(*ks.system, standard_generators(*ks.system));
  Path a = make_path(g, {one, one, one, one});
  Path b = make_path(g, {zero, zero, zero, zero});
  CHECK(ae_oracle(*ks.system, a, b, nr.nucleus.elements));
  CHECK_THROWS_AS(ae_oracle(*ks.system, a, make_path(g, {zero}), nr.nucleus.elements), Error);
  CHECK(ae_periodic(*ks.system, nr.nucleus, EPPath::make(g, {one}, {}), EPPath::make(g, {zero}, {})));
  CHECK_FALSE(ae_periodic(*ks.system, nr.nucleus, EPPath::make(g, {one, zero}, {}), EPPath::make(g, {zero}, {})));
}

TEST_CASE("exact equivalence implies the depth-10 oracle") {
  for (auto p : {fixtures::example1(), fixtures::embedding_example()}) {
    KepSystem ks = kep_system(p);
    const Graph& g = *ks.kg.graph;
    auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
    REQUIRE_FALSE(nr.diverged);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 150; ++i) {
      EPPath mu = random_eppath(g, 3, 3, rng);
      EPPath nu = i % 2 ? random_sibling(g, mu, rng) : random_eppath(g, 3, 3, rng);
      bool exact = ae_periodic(*ks.system, nr.nucleus, mu, nu);
      CHECK(exact == ae_periodic(*ks.system, nr.nucleus, nu, mu));
      if (exact) CHECK(ae_oracle(*ks.system, mu.truncate(g, 10), nu.truncate(g, 10), nr.nucleus.elements));
      CHECK(ae_periodic(*ks.system, nr.nucleus, mu, mu));
    }
  }
}
