#include "selfsim/embed.hpp"

#include <mpfr.h>

#include <algorithm>

#include "selfsim/error.hpp"

namespace selfsim {

EmbedConstants constants(const KatsuraPair& p, const EmbedConfig& cfg) {
  require_valid(p);
  EmbedConstants c;
  for (const auto& row : p.A)
    for (std::int64_t a : row) c.M = std::max(c.M, a < 0 ? -a : a);
  if (c.M <= 1) throw Error(ErrorCode::Degenerate, "max entry of A is at most 1");
  c.N = static_cast<std::int64_t>(p.size());
  c.R = cfg.R_override ? *cfg.R_override : checked_mul(c.M, c.N + 1);
  if (c.R <= c.N + 1) throw Error(ErrorCode::InvalidInput, "R must exceed N + 1");
  return c;
}

Embedding::Embedding(KatsuraPair p, EmbedConfig cfg) : ls_(std::move(p)), cfg_(cfg), c_(selfsim::constants(ls_.pair(), cfg)) {}

int Embedding::type(EdgeIndex e) const { return kep_graph().B(pair(), e) != 0 ? 1 : 0; }

namespace {

// Maximal runs of constant type over positions lo..hi, left to right.
template <class At>
std::vector<Interval> runs(std::int64_t lo, std::int64_t hi, At type_at) {
  std::vector<Interval> out;
  for (std::int64_t j = lo; j <= hi; ++j) {
    int t = type_at(j);
    if (!out.empty() && out.back().type == t) out.back().hi = j;
    else out.push_back(Interval{j, j, t});
  }
  return out;
}

}  // namespace

IntervalDecomp Embedding::decomp(const EPPath& mu) const {
  IntervalDecomp d;
  auto type_at = [&](std::int64_t j) { return type(mu.at(j)); };
  const auto m = static_cast<std::int64_t>(mu.preperiod());
  const auto L = static_cast<std::int64_t>(mu.period());
  bool constant = true;
  for (EdgeIndex e : mu.cycle()) constant = constant && type(e) == type(mu.cycle().front());
  if (constant) {
    const int t = type(mu.cycle().front());
    std::int64_t end = -m - 1;
    while (end < -1 && type_at(end + 1) == t) ++end;
    d.intervals.push_back(Interval{std::nullopt, end, t});
    auto rest = runs(end + 1, -1, type_at);
    d.intervals.insert(d.intervals.end(), rest.begin(), rest.end());
    return d;
  }
  // Rightmost interval start inside the periodic part; everything left of it
  // repeats with period L.
  std::int64_t cut = -m - 1;
  while (type_at(cut - 1) == type_at(cut)) --cut;
  d.period = static_cast<std::size_t>(L);
  d.block = runs(cut - L, cut - 1, type_at);
  d.intervals = runs(cut, -1, type_at);
  return d;
}

IntervalDecomp Embedding::decomp(const Path& prefix) const {
  IntervalDecomp d;
  const auto k = static_cast<std::int64_t>(prefix.length());
  d.intervals = runs(-k, -1, [&](std::int64_t j) { return type(prefix.edges[static_cast<std::size_t>(j + k)]); });
  return d;
}

Rational Embedding::omega(const std::vector<EdgeIndex>& seg) const {
  if (seg.empty()) throw Error(ErrorCode::InvalidInput, "empty segment");
  const auto& kg = kep_graph();
  Rational sum = 0;
  BigInt power = 1;
  for (auto it = seg.rbegin(); it != seg.rend(); ++it) {
    power *= c_.R;
    sum += make_rational(static_cast<std::int64_t>(kg.edges[*it].j + 1), power);
  }
  if (!cfg_.omit_range_term) sum += make_rational(static_cast<std::int64_t>(kg.edges[seg.front()].i + 1), power * c_.R);
  return sum;
}

Rational Embedding::omega(const EPPath& seg) const {
  const auto& kg = kep_graph();
  auto digits = [&](const std::vector<EdgeIndex>& edges, BigInt& power) {
    Rational sum = 0;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
      power *= c_.R;
      sum += make_rational(static_cast<std::int64_t>(kg.edges[*it].j + 1), power);
    }
    return sum;
  };
  BigInt ps = 1, pc = 1;
  Rational head = digits(seg.suffix(), ps);
  Rational block = digits(seg.cycle(), pc);
  // block * (1 + R^-L + R^-2L + ...) shifted past the suffix
  return head + block * make_rational(pc, pc - 1) / Rational(ps);
}

Rational Embedding::theta(const std::vector<EdgeIndex>& seg, int t) const {
  return frac(digit_sum(pair(), kep_graph(), seg, t == 0 ? 1 : 0));
}

Rational Embedding::theta(const EPPath& seg, int t) const {
  return frac(digit_series(pair(), kep_graph(), seg, t == 0 ? 1 : 0));
}

EmbedTerm Embedding::finite_term(const std::vector<EdgeIndex>& seg, const Interval& iv) const {
  return EmbedTerm{rpow(Rational(c_.R), 3 * iv.hi) * omega(seg), theta(seg, iv.type), iv, 0, 1};
}

std::vector<EmbedTerm> Embedding::terms(const EPPath& mu) const {
  IntervalDecomp d = decomp(mu);
  std::vector<EmbedTerm> out;
  auto seg = [&](const Interval& iv) {
    std::vector<EdgeIndex> s;
    for (std::int64_t j = *iv.lo; j <= iv.hi; ++j) s.push_back(mu.at(j));
    return s;
  };
  if (d.period > 0) {
    const Rational fold = 1 / (1 - rpow(Rational(c_.R), -3 * static_cast<std::int64_t>(d.period)));
    for (const auto& iv : d.block) {
      EmbedTerm t = finite_term(seg(iv), iv);
      t.period = d.period;
      t.fold = fold;
      out.push_back(std::move(t));
    }
  }
  for (const auto& iv : d.intervals) {
    if (iv.lo) {
      out.push_back(finite_term(seg(iv), iv));
    } else {
      EPPath part = mu.up_to(graph(), iv.hi);
      out.push_back(EmbedTerm{rpow(Rational(c_.R), 3 * iv.hi) * omega(part), theta(part, iv.type), iv, 0, 1});
    }
  }
  return out;
}

std::vector<EdgeIndex> Embedding::segment(const Path& p, std::int64_t lo, std::int64_t hi) const {
  const auto k = static_cast<std::int64_t>(p.length());
  return std::vector<EdgeIndex>(p.edges.begin() + (lo + k), p.edges.begin() + (hi + k + 1));
}

std::vector<EmbedTerm> Embedding::terms(const Path& prefix) const {
  if (prefix.edges.empty()) throw Error(ErrorCode::Precondition, "depth must be at least 1");
  std::vector<EmbedTerm> out;
  for (const auto& iv : decomp(prefix).intervals) out.push_back(finite_term(segment(prefix, *iv.lo, iv.hi), iv));
  return out;
}

Rational Embedding::tail_bound(const Path& prefix) const {
  if (prefix.edges.empty()) throw Error(ErrorCode::Precondition, "depth must be at least 1");
  const Interval J = decomp(prefix).intervals.front();
  const auto seg = segment(prefix, *J.lo, J.hi);
  const Rational R = c_.R, N = c_.N;
  const auto n = static_cast<std::int64_t>(seg.size());
  const auto k = static_cast<std::int64_t>(prefix.length());
  // Radius change of the leftmost interval. The next source equals the dropped
  // range vertex, so with the range term only digits from n+2 on change.
  Rational radius = N * rpow(R, -(n + 1)) / (R - 1);
  if (cfg_.omit_range_term) radius *= R;
  BigInt a_w = 1;
  for (EdgeIndex e : seg) a_w *= kep_graph().A(pair(), e) + (J.type == 0 ? 1 : 0);
  // |e^{ia} - e^{ib}| <= min(|a - b|, 2), with 2 pi < 44/7.
  const Rational chord = std::min(Rational(44, 7) / Rational(a_w), Rational(2));
  const Rational straddle = rpow(R, 3 * J.hi) * (radius + omega(seg) * chord);
  const Rational fresh = N * rpow(R, -3 * (k + 1)) / ((R - 1) * (1 - rpow(R, -3)));
  return straddle + fresh;
}

bool Embedding::zeta_equal(const EPPath& mu, const EPPath& nu) const {
  if (!ls_.binary() || !ls_.regular()) throw Error(ErrorCode::Precondition, "needs B in {0,1} and a regular pair");
  if (mu == nu) return true;
  // Without an infinite B = 1 tail the term list determines the path.
  if (!type1_tail_end(pair(), kep_graph(), mu) || !type1_tail_end(pair(), kep_graph(), nu)) return false;
  return terms(mu) == terms(nu);
}

namespace {

class Mp {
 public:
  explicit Mp(unsigned bits) { mpfr_init2(v, bits); mpfr_set_zero(v, 1); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t v;
};

void set_rational(mpfr_t out, const Rational& x, unsigned bits) {
  Mp den(bits);
  mpfr_set_str(out, numerator(x).str().c_str(), 10, MPFR_RNDN);
  mpfr_set_str(den.v, denominator(x).str().c_str(), 10, MPFR_RNDN);
  mpfr_div(out, out, den.v, MPFR_RNDN);
}

std::string text(const mpfr_t x, unsigned bits) {
  int digits = static_cast<int>(bits * 0.30103) + 1;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, x);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

}  // namespace

ComplexValue evaluate(const std::vector<EmbedTerm>& terms, unsigned bits) {
  bits = std::max(bits, 64u);
  Mp re(bits), im(bits), r(bits), a(bits), s(bits), c(bits);
  for (const auto& t : terms) {
    set_rational(r.v, t.scale * t.fold, bits);
    mpfr_const_pi(a.v, MPFR_RNDN);
    set_rational(s.v, 2 * t.angle, bits);
    mpfr_mul(a.v, a.v, s.v, MPFR_RNDN);
    mpfr_sin_cos(s.v, c.v, a.v, MPFR_RNDN);
    mpfr_mul(c.v, c.v, r.v, MPFR_RNDN);
    mpfr_mul(s.v, s.v, r.v, MPFR_RNDN);
    mpfr_add(re.v, re.v, c.v, MPFR_RNDN);
    mpfr_add(im.v, im.v, s.v, MPFR_RNDN);
  }
  ComplexValue out;
  out.re = mpfr_get_d(re.v, MPFR_RNDN);
  out.im = mpfr_get_d(im.v, MPFR_RNDN);
  out.re_text = text(re.v, bits);
  out.im_text = text(im.v, bits);
  return out;
}

std::vector<EmbedTerm> zeta_terms(const KatsuraPair& p, const EPPath& mu, const EmbedConfig& cfg) {
  return Embedding(p, cfg).terms(mu);
}

bool zeta_equal(const KatsuraPair& p, const EPPath& mu, const EPPath& nu) {
  return Embedding(p).zeta_equal(mu, nu);
}

}  // namespace selfsim
