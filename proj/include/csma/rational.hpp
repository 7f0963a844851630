#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace csma {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

/// "p/q", or "p" when q == 1.
std::string to_fraction_string(const Rational& r);

/// Correctly rounded decimal with `significant` significant digits,
/// independent of the C locale. Uses scientific notation only for
/// magnitudes below 1e-6.
std::string to_decimal_string(const Rational& r, int significant = 12);

double to_double(const Rational& r);

BigInt factorial(unsigned n);
BigInt power_of_two(unsigned k);

}  // namespace csma
