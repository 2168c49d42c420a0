#include "selfsim/limitspace.hpp"

#include "selfsim/error.hpp"

namespace selfsim {

Rational digit_sum(const KatsuraPair& p, const KepGraph& kg, const std::vector<EdgeIndex>& edges, int offset) {
  Rational sum = 0;
  BigInt denom = 1;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    denom *= kg.A(p, *it) + offset;
    sum += make_rational(kg.edges[*it].m, denom);
  }
  return sum;
}

Rational digit_series(const KatsuraPair& p, const KepGraph& kg, const EPPath& mu, int offset) {
  BigInt a_suffix = 1, a_cycle = 1;
  for (EdgeIndex e : mu.suffix()) a_suffix *= kg.A(p, e) + offset;
  for (EdgeIndex e : mu.cycle()) a_cycle *= kg.A(p, e) + offset;
  Rational head = digit_sum(p, kg, mu.suffix(), offset);
  Rational block = digit_sum(p, kg, mu.cycle(), offset);
  // Digits on A = 1 edges are 0, so a cycle with product 1 adds nothing.
  if (a_cycle == 1) return head;
  // block * (1 + 1/a + 1/a^2 + ...) = block * a / (a - 1)
  return head + block * make_rational(a_cycle, a_cycle - 1) / Rational(a_suffix);
}

std::optional<std::int64_t> type1_tail_end(const KatsuraPair& p, const KepGraph& kg, const EPPath& mu) {
  for (EdgeIndex e : mu.cycle())
    if (kg.B(p, e) != 1) return std::nullopt;
  const auto& s = mu.suffix();
  std::int64_t end = -static_cast<std::int64_t>(s.size()) - 1;
  for (EdgeIndex e : s) {
    if (kg.B(p, e) != 1) break;
    ++end;
  }
  return end;
}

std::string to_string(ComponentClass::Kind k) { return k == ComponentClass::Kind::Circle ? "CIRCLE" : "POINT"; }

LimitSpace::LimitSpace(KatsuraPair p) : pair_(std::move(p)) {
  require_valid(pair_);
  kg_ = build_graph(pair_);
  binary_ = is_01(pair_);
  regular_ = binary_ && regular_01(pair_).verdict == Verdict::Yes;
}

void LimitSpace::require_binary() const {
  if (!binary_) throw Error(ErrorCode::Precondition, "B must have entries in {0,1}");
}

void LimitSpace::require_regular() const {
  require_binary();
  if (!regular_) throw Error(ErrorCode::Precondition, "the pair is not regular");
}

Rational LimitSpace::theta1(const EPPath& mu, std::int64_t from) const {
  EPPath part = mu.up_to(graph(), from);
  for (EdgeIndex e : part.cycle())
    if (kg_.B(pair_, e) != 1) throw Error(ErrorCode::Precondition, "B is not 1 along the spine");
  for (EdgeIndex e : part.suffix())
    if (kg_.B(pair_, e) != 1) throw Error(ErrorCode::Precondition, "B is not 1 along the spine");
  return frac(digit_series(pair_, kg_, part, 0));
}

bool LimitSpace::same_component(const EPPath& mu, const EPPath& nu, std::int64_t* tail_end) const {
  // With B in {0,1} the B-value at a position is fixed by the source vertices,
  // so equal spines force the same tail end; it still has to exist.
  auto tm = type1_tail_end(pair_, kg_, mu);
  auto tn = type1_tail_end(pair_, kg_, nu);
  if (!tm || !tn || *tm != *tn) return false;
  for (std::int64_t j = *tm + 1; j <= -1; ++j)
    if (mu.at(j) != nu.at(j)) return false;
  // Both paths repeat with the joint period left of the joint preperiod.
  const auto depth = static_cast<std::int64_t>(joint_preperiod(mu, nu) + 2 * joint_period(mu, nu));
  const Graph& g = graph();
  for (std::int64_t j = *tm; j >= *tm - depth; --j)
    if (g.source(mu.at(j)) != g.source(nu.at(j))) return false;
  *tail_end = *tm;
  return true;
}

// The break is unique: it sits just right of the maximal infinite B = 1
// interval, which both paths must share. Left of it the digit expansions
// decide, right of it the edges must agree.
bool LimitSpace::ae_equivalent(const EPPath& mu, const EPPath& nu) const {
  require_regular();
  if (mu == nu) return true;
  std::int64_t end = 0;
  if (!same_component(mu, nu, &end)) return false;
  return theta1(mu, end) == theta1(nu, end);
}

bool LimitSpace::component_equivalent(const EPPath& mu, const EPPath& nu) const {
  require_binary();
  if (mu == nu) return true;
  std::int64_t end = 0;
  return same_component(mu, nu, &end);
}

ComponentClass LimitSpace::classify(const EPPath& mu) const {
  require_regular();
  ComponentClass out;
  auto end = type1_tail_end(pair_, kg_, mu);
  if (!end) return out;  // K infinite: the fiber is the single path
  out.K = static_cast<std::size_t>(-1 - *end);
  bool unbounded = false;
  for (EdgeIndex e : mu.cycle())
    if (kg_.A(pair_, e) >= 2) unbounded = true;
  if (*out.K == 0) {
    out.case_number = unbounded ? 2 : 3;
    if (unbounded) {
      out.kind = ComponentClass::Kind::Circle;
      out.dynamics_exponent = kg_.A(pair_, mu.at(-1));
      out.theta = theta1(mu, -1);
    }
    return out;
  }
  // 0 < K: the tail fiber times the finite fiber of the last K edges; the
  // shift acts as the identity on the tail circle.
  out.case_number = 4;
  if (unbounded) {
    out.kind = ComponentClass::Kind::Circle;
    out.theta = theta1(mu, *end);
  }
  return out;
}

Rational theta1(const KatsuraPair& p, const EPPath& mu, std::int64_t from) { return LimitSpace(p).theta1(mu, from); }
bool ae_equivalent(const KatsuraPair& p, const EPPath& mu, const EPPath& nu) {
  return LimitSpace(p).ae_equivalent(mu, nu);
}
bool component_equivalent(const KatsuraPair& p, const EPPath& mu, const EPPath& nu) {
  return LimitSpace(p).component_equivalent(mu, nu);
}
ComponentClass classify_component(const KatsuraPair& p, const EPPath& mu) { return LimitSpace(p).classify(mu); }

}  // namespace selfsim
