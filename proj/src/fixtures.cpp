#include "selfsim/fixtures.hpp"

namespace selfsim::fixtures {

KatsuraPair example1() { return {{{2, 1}, {1, 2}}, {{1, 1}, {0, 1}}}; }
KatsuraPair example2() { return {{{2, 1}, {1, 2}}, {{1, 1}, {1, 1}}}; }
KatsuraPair example3() { return {{{1, 2}, {2, 1}}, {{1, 1}, {0, 1}}}; }
KatsuraPair example4() { return {{{2}}, {{3}}}; }
KatsuraPair odometer() { return {{{2}}, {{1}}}; }
KatsuraPair embedding_example() { return {{{2, 2}, {3, 2}}, {{1, 1}, {0, 1}}}; }

EmbeddingPairDecl putnam_figure() {
  EmbeddingPairDecl d;
  d.H = GraphDecl{{"v"}, {{"e", "v", "v"}}};
  d.E = GraphDecl{{"v"}, {{"e0", "v", "v"}, {"e1", "v", "v"}, {"f", "v", "v"}}};
  d.xi0 = GraphMapDecl{{{"v", "v"}}, {{"e", "e0"}}};
  d.xi1 = GraphMapDecl{{{"v", "v"}}, {{"e", "e1"}}};
  return d;
}

GraphDecl outsplit_graph() {
  return GraphDecl{{"x", "y"}, {{"1", "x", "x"}, {"2", "y", "x"}, {"3", "x", "y"}, {"4", "x", "y"}}};
}

OutSplitSpec outsplit_spec() {
  return OutSplitSpec{{"v1", "v2", "v3"},
                      {{"1", "v1"}, {"2", "v2"}, {"3", "v3"}, {"4", "v3"}},
                      {{"v1", "x"}, {"v2", "x"}, {"v3", "y"}}};
}

std::vector<NamedPair> analysis_examples() {
  return {{"example1", example1()}, {"example2", example2()}, {"example3", example3()}, {"example4", example4()}};
}

}  // namespace selfsim::fixtures
