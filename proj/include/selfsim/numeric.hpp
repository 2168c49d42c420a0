#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace selfsim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Order of a cyclic isotropy group. Zero stands for the infinite cyclic group,
// so that reduction mod 0 leaves the exponent unchanged.
using Modulus = std::int64_t;
inline constexpr Modulus kInfinite = 0;

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);
std::int64_t reduce_mod(std::int64_t k, Modulus m);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t to_int64(const BigInt& x);

Rational make_rational(const BigInt& num, const BigInt& den);
Rational frac(const Rational& x);  // representative in [0,1)
BigInt ipow(const BigInt& base, std::uint64_t exp);
Rational rpow(const Rational& base, std::int64_t exp);

// "p/q", or "p" when q = 1.
std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);
Rational parse_rational(const std::string& text);

// Largest r with r^n <= x, for x >= 0.
BigInt integer_root(const BigInt& x, unsigned n);

// Exponent of the prime p in |x|; x must be nonzero.
unsigned valuation(std::int64_t x, std::int64_t p);
std::vector<std::int64_t> prime_factors(std::int64_t x);

}  // namespace selfsim
