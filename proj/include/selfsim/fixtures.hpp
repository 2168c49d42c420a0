#pragma once

#include <string>
#include <vector>

#include "selfsim/kep.hpp"
#include "selfsim/outsplit.hpp"
#include "selfsim/putnam.hpp"

namespace selfsim::fixtures {

KatsuraPair example1();           // contracting and regular
KatsuraPair example2();           // not contracting, not regular
KatsuraPair example3();           // finite part only, not regular
KatsuraPair example4();           // not contracting, regular
KatsuraPair odometer();           // A = (2), B = (1)
KatsuraPair embedding_example();  // A = [[2,2],[3,2]], B = [[1,1],[0,1]]

// H = one loop e at v; E = loops e0, e1, f at v; xi^i(e) = e_i.
EmbeddingPairDecl putnam_figure();

// E on x, y with a loop 1 at x, 2: x -> y, 3, 4: y -> x; split into v1, v2, v3.
GraphDecl outsplit_graph();
OutSplitSpec outsplit_spec();

struct NamedPair {
  std::string name;
  KatsuraPair pair;
};
std::vector<NamedPair> analysis_examples();

}  // namespace selfsim::fixtures
