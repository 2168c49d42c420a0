#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "selfsim/action.hpp"
#include "selfsim/kep.hpp"
#include "selfsim/putnam.hpp"

namespace selfsim {

struct OutSplitSpec {
  std::vector<std::string> targets;
  std::map<std::string, std::string> pi;    // E-edge -> target
  std::map<std::string, std::string> beta;  // target -> E-vertex
};

std::vector<Defect> validate_outsplit(const Graph& E, const OutSplitSpec& spec);

// The out-split graph E_OS with edges (v,e), beta(v) = r(e), r = v, s = pi(e).
struct OutSplit {
  std::shared_ptr<const Graph> E;
  std::shared_ptr<const Graph> graph;
  std::vector<VertexIndex> pi;    // E-edge -> target
  std::vector<VertexIndex> beta;  // target -> E-vertex
  std::vector<std::pair<VertexIndex, EdgeIndex>> pairs;  // OS-edge -> (v, e)
  std::map<std::pair<VertexIndex, EdgeIndex>, EdgeIndex> lookup;

  EdgeIndex edge(VertexIndex v, EdgeIndex e) const { return lookup.at({v, e}); }
};

OutSplit make_outsplit(std::shared_ptr<const Graph> E, const OutSplitSpec& spec);  // throws SPEC_INVALID
Graph outsplit_graph(const Graph& E, const OutSplitSpec& spec);
// The trivial out-split by pi = s, beta = id.
OutSplitSpec source_split(const Graph& E);

Path conjugacy_I_n(const OutSplit& os, VertexIndex v, const Path& mu);
Path project(const OutSplit& os, const Path& p);
EPPath conjugacy_I(const OutSplit& os, const EPPath& mu);

std::shared_ptr<const ActionSystem> outsplit_bundle(std::shared_ptr<const ActionSystem> sys, const OutSplit& os);

struct PutnamKep {
  KatsuraPair pair;
  std::vector<std::string> vertex_names;   // class names, in matrix order
  OutSplit os;
  std::vector<EdgeIndex> kep_edge;         // OS-edge -> E_A edge
  KepGraph kg;
};
PutnamKep putnam_to_kep(const EmbeddingPair& xi);

struct ConjugacyReport {
  std::size_t samples = 0;
  std::size_t related = 0;  // pairs found equivalent on the E side
  std::vector<std::string> discrepancies;
};
// Samples pairs of eventually periodic paths (cycle + suffix length <= depth) and
// compares exact asymptotic equivalence before and after the conjugacy I, plus
// finite-depth oracle consistency.
ConjugacyReport conjugacy_check(std::shared_ptr<const ActionSystem> sys, const OutSplit& os, std::size_t depth,
                                std::size_t samples, std::uint64_t seed);

}  // namespace selfsim
