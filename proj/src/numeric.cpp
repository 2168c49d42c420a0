#include "selfsim/numeric.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

#include "selfsim/error.hpp"

namespace selfsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainMismatch: return "DOMAIN_MISMATCH";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::InvalidPair: return "INVALID_PAIR";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::Precondition: return "PRECONDITION";
    case ErrorCode::ZeroRow: return "ZERO_ROW";
    case ErrorCode::SpecInvalid: return "SPEC_INVALID";
    case ErrorCode::NotGroupBundle: return "NOT_GROUP_BUNDLE";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::Overflow: return "OVERFLOW";
  }
  return "UNKNOWN_ERROR";
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "exponent addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "exponent product");
  return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

std::int64_t reduce_mod(std::int64_t k, Modulus m) {
  if (m == kInfinite) return k;
  return floor_mod(k, m);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b);
}

std::int64_t to_int64(const BigInt& x) {
  if (x > BigInt(std::numeric_limits<std::int64_t>::max()) ||
      x < BigInt(std::numeric_limits<std::int64_t>::min()))
    throw Error(ErrorCode::Overflow, "value exceeds 64 bits");
  return static_cast<std::int64_t>(x);
}

Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

Rational frac(const Rational& x) {
  BigInt n = numerator(x), d = denominator(x);
  BigInt r = n % d;
  if (r < 0) r += d;
  return Rational(r, d);
}

BigInt ipow(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1, b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    exp >>= 1;
    if (exp) b *= b;
  }
  return result;
}

Rational rpow(const Rational& base, std::int64_t exp) {
  if (exp >= 0) return Rational(ipow(numerator(base), exp), ipow(denominator(base), exp));
  return Rational(ipow(denominator(base), -exp), ipow(numerator(base), -exp));
}

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad rational '" + text + "'");
  }
}

BigInt integer_root(const BigInt& x, unsigned n) {
  if (x < 2 || n == 1) return x;
  BigInt lo = 1, hi = BigInt(1) << (msb(x) / n + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (ipow(mid, n) <= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

unsigned valuation(std::int64_t x, std::int64_t p) {
  x = std::llabs(x);
  unsigned v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::vector<std::int64_t> prime_factors(std::int64_t x) {
  x = std::llabs(x);
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= x; ++p) {
    if (x % p == 0) {
      out.push_back(p);
      while (x % p == 0) x /= p;
    }
  }
  if (x > 1) out.push_back(x);
  return out;
}

}  // namespace selfsim
