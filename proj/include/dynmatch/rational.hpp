#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace dynmatch {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// base^exp with exact arithmetic; exp may be negative (base must be nonzero then).
Rational pow_rational(const Rational& base, long exp);

// Accepts "7", "-3", "1/2", "0.25", "12.5". Exact: decimals become p/10^k.
Rational parse_rational(const std::string& text);

double to_double(const Rational& x);

// Canonical form: "p" when integral, else "p/q".
std::string format_rational(const Rational& x);

// Smallest k >= 0 with base^k >= x. Requires base > 1; returns 0 for x <= 1.
long ceil_log(const Rational& base, const Rational& x);

// Smallest integer >= x.
BigInt ceil_rational(const Rational& x);

// floor(x) clamped into [0, UINT64_MAX].
uint64_t floor_to_uint64(const Rational& x);

}  // namespace dynmatch
