#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/kep.hpp"
#include "selfsim/paths.hpp"

namespace selfsim {

// Digit expansions sum_j #(e_j) / prod_{i<=j} (A(e_i) + offset), read from
// position -1 leftward. Not reduced mod 1.
Rational digit_sum(const KatsuraPair& p, const KepGraph& kg, const std::vector<EdgeIndex>& edges, int offset);
Rational digit_series(const KatsuraPair& p, const KepGraph& kg, const EPPath& mu, int offset);

// Right end of the infinite B = 1 interval, or nullopt if the cycle has a B = 0 edge.
std::optional<std::int64_t> type1_tail_end(const KatsuraPair& p, const KepGraph& kg, const EPPath& mu);

struct ComponentClass {
  enum class Kind { Point, Circle };
  Kind kind = Kind::Point;
  std::optional<std::size_t> K;  // nullopt: B = 0 infinitely often
  std::int64_t dynamics_exponent = 1;
  std::optional<Rational> theta;  // digit expansion of the circle coordinate
  int case_number = 1;
};
std::string to_string(ComponentClass::Kind k);

// Deciders on E_A^{-inf} for a KEP pair with B in {0,1}.
class LimitSpace {
 public:
  explicit LimitSpace(KatsuraPair p);  // throws INVALID_PAIR

  const KatsuraPair& pair() const { return pair_; }
  const KepGraph& kep_graph() const { return kg_; }
  const Graph& graph() const { return *kg_.graph; }
  bool binary() const { return binary_; }
  bool regular() const { return regular_; }

  // Expansion of the part of mu at positions <= from, reduced mod 1. Needs B = 1 there.
  Rational theta1(const EPPath& mu, std::int64_t from = -1) const;
  bool ae_equivalent(const EPPath& mu, const EPPath& nu) const;
  bool component_equivalent(const EPPath& mu, const EPPath& nu) const;
  ComponentClass classify(const EPPath& mu) const;

 private:
  void require_binary() const;
  void require_regular() const;
  // Same K, same edges right of it, same source vertices left of it.
  bool same_component(const EPPath& mu, const EPPath& nu, std::int64_t* tail_end) const;

  KatsuraPair pair_;
  KepGraph kg_;
  bool binary_ = false;
  bool regular_ = false;
};

Rational theta1(const KatsuraPair& p, const EPPath& mu, std::int64_t from = -1);
bool ae_equivalent(const KatsuraPair& p, const EPPath& mu, const EPPath& nu);
bool component_equivalent(const KatsuraPair& p, const EPPath& mu, const EPPath& nu);
ComponentClass classify_component(const KatsuraPair& p, const EPPath& mu);

}  // namespace selfsim
