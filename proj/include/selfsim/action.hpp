#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/paths.hpp"

namespace selfsim {

// a_v^k in a cyclic group bundle; the modulus lives in the owning system and
// the exponent is always reduced (0 <= k < m for finite m).
struct Element {
  VertexIndex vertex = 0;
  std::int64_t exponent = 0;

  bool is_unit() const { return exponent == 0; }
  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
};

struct StepResult {
  EdgeIndex edge;
  Element restriction;
};

// Self-similar cyclic group bundle acting on the paths of a graph.
class ActionSystem {
 public:
  using StepFn = std::function<StepResult(const Element&, EdgeIndex)>;

  ActionSystem(std::shared_ptr<const Graph> graph, std::vector<Modulus> moduli, StepFn step);

  const Graph& graph() const { return *graph_; }
  std::shared_ptr<const Graph> graph_ptr() const { return graph_; }
  Modulus modulus(VertexIndex v) const { return moduli_.at(v); }
  const std::vector<Modulus>& moduli() const { return moduli_; }

  Element element(VertexIndex v, std::int64_t k) const;
  Element unit(VertexIndex v) const { return Element{v, 0}; }
  Element inverse(const Element& g) const;
  Element multiply(const Element& g, const Element& h) const;  // gh, same vertex

  // g.e and g|_e with the restriction reduced; throws DOMAIN_MISMATCH if r(e) != vertex.
  StepResult step(const Element& g, EdgeIndex e) const;

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<Modulus> moduli_;
  StepFn step_;
};

// (g.mu, g|_mu).
std::pair<Path, Element> act_on_path(const ActionSystem& sys, const Element& g, const Path& mu);

struct Violation {
  std::string axiom;
  std::string detail;
};
// Checks A0-A3 and the restriction laws on all elements with |k| <= exponent_bound
// (all residues when the modulus is finite and smaller) and all paths up to depth.
std::vector<Violation> verify_axioms(const ActionSystem& sys, std::size_t depth,
                                     std::int64_t exponent_bound);

struct Nucleus {
  std::vector<Element> elements;  // sorted
  std::map<std::pair<Element, EdgeIndex>, Element> restriction;

  bool contains(const Element& g) const;
};

struct NucleusResult {
  bool diverged = false;
  std::size_t closure_size = 0;
  Nucleus nucleus;
};

// Closes generators (plus units) under restriction by single edges; the nucleus
// is everything on or below a cycle of the restriction digraph. The search gives
// up after max_iters rounds or 1000 * max_iters elements; 0 selects 10 times the
// starting set.
NucleusResult compute_nucleus(const ActionSystem& sys, std::vector<Element> generators,
                              std::size_t max_iters = 0);

// Repeats compute_nucleus on N u N*S (S the generators and inverses) until it
// stops growing, so restrictions of products are covered too.
NucleusResult stable_nucleus(const ActionSystem& sys, std::vector<Element> generators,
                             std::size_t max_iters = 0);

// Exponent +-1 at every vertex with a nontrivial group.
std::vector<Element> standard_generators(const ActionSystem& sys);

// Finite-depth witness check: every depth t <= |mu| has some g in F mapping the
// last t edges of mu to those of nu.
bool ae_oracle(const ActionSystem& sys, const Path& mu, const Path& nu, const std::vector<Element>& F);

// Exact asymptotic equivalence of eventually periodic paths when F is a finite
// restriction-closed set containing the nucleus.
bool ae_periodic(const ActionSystem& sys, const Nucleus& F, const EPPath& mu, const EPPath& nu);

}  // namespace selfsim
