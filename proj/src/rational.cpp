#include "csma/rational.hpp"

#include <stdexcept>

namespace csma {

namespace {

BigInt pow10(unsigned k) {
  BigInt p = 1;
  for (unsigned i = 0; i < k; ++i) p *= 10;
  return p;
}

// 10^e as a rational, for any sign of e.
Rational pow10_rational(int e) {
  return e >= 0 ? Rational(pow10(static_cast<unsigned>(e))) : Rational(BigInt(1), pow10(static_cast<unsigned>(-e)));
}

int decimal_digits(const BigInt& v) { return static_cast<int>(v.str().size()); }

}  // namespace

std::string to_fraction_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

std::string to_decimal_string(const Rational& r, int significant) {
  if (significant < 1) throw std::invalid_argument("need at least one significant digit");
  if (r == 0) return "0";
  const bool negative = r < 0;
  const Rational a = negative ? Rational(-r) : r;

  int e = decimal_digits(numerator_of(a)) - decimal_digits(denominator_of(a));
  while (pow10_rational(e) > a) --e;
  while (pow10_rational(e + 1) <= a) ++e;

  // scaled = round_half_up(a * 10^(significant - 1 - e))
  const Rational scaled_exact = a * pow10_rational(significant - 1 - e);
  BigInt q = numerator_of(scaled_exact) / denominator_of(scaled_exact);
  const BigInt rem = numerator_of(scaled_exact) - q * denominator_of(scaled_exact);
  if (2 * rem >= denominator_of(scaled_exact)) q += 1;
  if (q == pow10(static_cast<unsigned>(significant))) {
    q /= 10;
    ++e;
  }

  std::string digits = q.str();
  std::string out = negative ? "-" : "";
  if (e < -6) {
    std::string mant = digits.substr(0, 1);
    std::string frac = digits.substr(1);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += mant;
    if (!frac.empty()) out += "." + frac;
    out += "e-" + std::to_string(-e);
    return out;
  }
  if (e >= 0) {
    const auto int_len = static_cast<std::size_t>(e + 1);
    if (digits.size() <= int_len) {
      out += digits + std::string(int_len - digits.size(), '0');
      return out;
    }
    std::string frac = digits.substr(int_len);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += digits.substr(0, int_len);
    if (!frac.empty()) out += "." + frac;
    return out;
  }
  std::string frac = std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  out += "0." + frac;
  return out;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt power_of_two(unsigned k) {
  BigInt p = 1;
  p <<= k;
  return p;
}

}  // namespace csma
