#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/action.hpp"
#include "selfsim/graph.hpp"

namespace selfsim {

using Matrix = std::vector<std::vector<std::int64_t>>;

struct KatsuraPair {
  Matrix A;
  Matrix B;
  std::size_t size() const { return A.size(); }
};

std::vector<Defect> validate_pair(const KatsuraPair& p);
void require_valid(const KatsuraPair& p);  // throws INVALID_PAIR

struct KepEdge {
  VertexIndex i;  // range
  VertexIndex j;  // source
  std::int64_t m;
};

// E_A with vertices "1".."N" and edges "e_i_j_m".
struct KepGraph {
  std::shared_ptr<const Graph> graph;
  std::vector<KepEdge> edges;
  std::vector<std::vector<std::vector<EdgeIndex>>> index;  // [i][j][m]

  EdgeIndex edge(VertexIndex i, VertexIndex j, std::int64_t m) const { return index.at(i).at(j).at(m); }
  std::int64_t A(const KatsuraPair& p, EdgeIndex e) const { return p.A[edges[e].i][edges[e].j]; }
  std::int64_t B(const KatsuraPair& p, EdgeIndex e) const { return p.B[edges[e].i][edges[e].j]; }
};

KepGraph build_graph(const KatsuraPair& p);
std::string kep_edge_name(VertexIndex i, VertexIndex j, std::int64_t m);

// kB + m = k_hat A + m_hat with 0 <= m_hat < A.
struct Division {
  std::int64_t k_hat;
  std::int64_t m_hat;
};
Division kep_division(std::int64_t k, std::int64_t A, std::int64_t B, std::int64_t m);

// a_i^k . e_{i,j,m} = e_{i,j,m_hat}, restriction a_j^{k_hat}; exponents unreduced.
StepResult kep_step(const KatsuraPair& p, const KepGraph& kg, const Element& g, EdgeIndex e);

// Isotropy orders o_v, kInfinite for vertices of the infinite part.
std::vector<Modulus> isotropy_orders(const KatsuraPair& p);

// The KEP action on E_A with exponents reduced mod o_v.
struct KepSystem {
  KatsuraPair pair;
  KepGraph kg;
  std::shared_ptr<const ActionSystem> system;
};
KepSystem kep_system(const KatsuraPair& p);

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

struct KernelResult {
  Verdict verdict;
  std::optional<Path> witness;
};
KernelResult kernel_member(const KatsuraPair& p, VertexIndex i, std::int64_t k, std::size_t depth);

struct Decomposition {
  std::vector<VertexIndex> infinite_vertices;
  std::vector<VertexIndex> finite_vertices;
  Matrix A_inf, B_inf, A_fin, B_fin;
};
Decomposition decompose(const KatsuraPair& p);
std::vector<bool> infinite_mask(const KatsuraPair& p);

// Edge masks of E_{A,inf} (B_e != 0, source infinite) and E_{A,<inf} (B_e != 0, range finite).
EdgeMask infinite_part_edges(const KatsuraPair& p, const KepGraph& kg, const std::vector<bool>& inf);
EdgeMask finite_part_edges(const KatsuraPair& p, const KepGraph& kg, const std::vector<bool>& inf);

// Max geometric cycle mean of |B_e|/A_e on E_{A,inf}; `none` means ZERO.
GeometricMean contraction_coefficient(const KatsuraPair& p);

struct RegularityResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  // Witness data; which fields are used depends on `reason`.
  std::vector<EdgeIndex> cycle;
  std::vector<EdgeIndex> connector;
  std::optional<EdgeIndex> edge;
  std::optional<Element> element;
  std::vector<std::pair<std::size_t, std::int64_t>> prime_certificates;  // (component, prime)
};

RegularityResult regular_01(const KatsuraPair& p);
RegularityResult regular_general(const KatsuraPair& p, std::int64_t k_max = 8, std::size_t d_max = 8);
// Re-derives a NO witness or YES certificate from the matrices alone.
bool recheck_certificate(const KatsuraPair& p, const RegularityResult& r);

struct AbelianGroup {
  std::vector<BigInt> torsion;  // invariant factors > 1
  std::size_t free_rank = 0;
  std::string str() const;
  bool operator==(const AbelianGroup&) const = default;
};
struct KTheory {
  AbelianGroup K0;
  AbelianGroup K1;
};

// Nonzero Smith invariant factors (positive, each dividing the next).
std::vector<BigInt> smith_invariants(const Matrix& m);
KTheory k_theory(const KatsuraPair& p);

struct AnalysisReport {
  bool contracting;
  GeometricMean rho;
  RegularityResult regular;
  std::vector<Modulus> orders;
  Decomposition decomposition;
};
AnalysisReport analyze(const KatsuraPair& p, std::int64_t k_max = 8, std::size_t d_max = 8);

bool is_01(const KatsuraPair& p);

}  // namespace selfsim
