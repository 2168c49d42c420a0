#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "selfsim/kep.hpp"
#include "selfsim/paths.hpp"

namespace selfsim {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Regression and property checks over the built-in fixtures.
std::vector<Check> selftest(std::uint64_t seed);

// Pair generator for equivalence checks: identical, sibling, independent, or a
// carry twin (...00i vs ...(A-1)(A-1)(i-1) over the same spine) when possible.
std::pair<EPPath, EPPath> sample_kep_pair(const KatsuraPair& p, const KepGraph& kg, std::size_t index,
                                          std::mt19937_64& rng);

struct EquivalenceStats {
  std::size_t samples = 0;
  std::size_t equivalent = 0;
  std::vector<std::string> failures;
};
// ae_equivalent vs zeta_equal, and both against the finite-depth oracle with the nucleus.
EquivalenceStats ae_agreement(const KatsuraPair& p, std::size_t samples, std::size_t depth, std::uint64_t seed);
// xi_equivalent vs the exact nucleus-based check on the Putnam fixture.
EquivalenceStats putnam_agreement(std::size_t samples, std::uint64_t seed);

}  // namespace selfsim
