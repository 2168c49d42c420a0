#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/kep.hpp"
#include "selfsim/limitspace.hpp"
#include "selfsim/paths.hpp"

namespace selfsim {

struct EmbedConfig {
  std::optional<std::int64_t> R_override;
  // Drop r(mu_{-n}) R^{-(n+1)} from Omega on finite segments.
  bool omit_range_term = false;
};

struct EmbedConstants {
  std::int64_t M = 0;
  std::int64_t N = 0;
  std::int64_t R = 0;
};
EmbedConstants constants(const KatsuraPair& p, const EmbedConfig& cfg = {});  // throws DEGENERATE

// [lo, hi] with lo = nullopt for -infinity. Type 1 when B != 0.
struct Interval {
  std::optional<std::int64_t> lo;
  std::int64_t hi = -1;
  int type = 0;
  bool operator==(const Interval&) const = default;
};

// Intervals from left to right. When the cycle mixes B-values, `block` holds
// the intervals left of `intervals` that repeat with shifts by -period*t, t >= 0.
struct IntervalDecomp {
  std::vector<Interval> block;
  std::size_t period = 0;
  std::vector<Interval> intervals;
};

// scale * e^{2 pi i angle}, times `fold` = 1/(1 - R^{-3 period}) for a periodic family.
struct EmbedTerm {
  Rational scale;
  Rational angle;
  Interval interval;
  std::size_t period = 0;
  Rational fold = 1;
  bool operator==(const EmbedTerm&) const = default;
};

class Embedding {
 public:
  explicit Embedding(KatsuraPair p, EmbedConfig cfg = {});

  const EmbedConstants& constants() const { return c_; }
  const EmbedConfig& config() const { return cfg_; }
  const LimitSpace& limit_space() const { return ls_; }
  const KatsuraPair& pair() const { return ls_.pair(); }
  const KepGraph& kep_graph() const { return ls_.kep_graph(); }
  const Graph& graph() const { return ls_.graph(); }
  int type(EdgeIndex e) const;

  IntervalDecomp decomp(const EPPath& mu) const;
  IntervalDecomp decomp(const Path& prefix) const;

  Rational omega(const std::vector<EdgeIndex>& segment) const;
  Rational omega(const EPPath& segment) const;
  Rational theta(const std::vector<EdgeIndex>& segment, int type) const;
  Rational theta(const EPPath& segment, int type) const;

  std::vector<EmbedTerm> terms(const EPPath& mu) const;
  // Terms of the truncation zeta_k, k = |prefix|.
  std::vector<EmbedTerm> terms(const Path& prefix) const;
  // Upper bound on |zeta(mu) - zeta_k(mu)| over all extensions mu of the prefix.
  Rational tail_bound(const Path& prefix) const;

  // Structural decision of zeta(mu) = zeta(nu); needs B in {0,1} and regularity.
  bool zeta_equal(const EPPath& mu, const EPPath& nu) const;

 private:
  std::vector<EdgeIndex> segment(const Path& p, std::int64_t lo, std::int64_t hi) const;
  EmbedTerm finite_term(const std::vector<EdgeIndex>& seg, const Interval& iv) const;

  LimitSpace ls_;
  EmbedConfig cfg_;
  EmbedConstants c_;
};

struct ComplexValue {
  double re = 0;
  double im = 0;
  std::string re_text;
  std::string im_text;
};
ComplexValue evaluate(const std::vector<EmbedTerm>& terms, unsigned precision_bits = 128);

std::vector<EmbedTerm> zeta_terms(const KatsuraPair& p, const EPPath& mu, const EmbedConfig& cfg = {});
bool zeta_equal(const KatsuraPair& p, const EPPath& mu, const EPPath& nu);

struct RenderConfig {
  std::size_t depth = 6;
  int canvas = 1024;
  unsigned precision_bits = 128;
  std::size_t sample_threshold = 200000;  // sample this many prefixes above it
  std::uint64_t seed = 1;
  std::size_t circle_cycle_max = 2;
  unsigned threads = 0;  // 0: hardware concurrency
  EmbedConfig embed;
};

struct RenderedCircle {
  std::vector<EmbedTerm> center_terms;
  Rational radius;
  ComplexValue center;
};

struct RenderedPoint {
  std::string id;
  ComplexValue z;
  bool circle = false;
};

struct RenderResult {
  EmbedConstants constants;
  bool sampled = false;
  bool injectivity_guaranteed = true;
  double scale = 0;  // pixels per unit
  std::vector<RenderedPoint> points;
  std::vector<RenderedCircle> circles;
};

// Computes the depth-k points and the circles of CIRCLE components with short
// cycles; writes SVG and CSV when the paths are nonempty.
RenderResult render(const KatsuraPair& p, const RenderConfig& cfg, const std::string& out_svg,
                    const std::string& out_points);
std::string svg_document(const RenderResult& r, const RenderConfig& cfg);
std::string csv_document(const RenderResult& r);

}  // namespace selfsim
