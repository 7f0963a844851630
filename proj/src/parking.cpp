#include "csma/parking.hpp"

#include <stdexcept>
#include <string>

namespace csma::parking {

namespace {

// (-1)^(k+1) 2^(k-1) / k!
Rational alternating_term(int k) {
  Rational t(power_of_two(static_cast<unsigned>(k - 1)), factorial(static_cast<unsigned>(k)));
  return (k % 2 == 1) ? t : Rational(-t);
}

Rational departures_or_zero(int n) { return n <= 0 ? Rational(0) : line_departures(n); }

// table[b][a] = L_{a:b} for 0 <= a <= b <= m; entries with a <= 0 are zero.
std::vector<std::vector<Rational>> partial_table(int m) {
  std::vector<Rational> line(static_cast<std::size_t>(m + 1));
  for (int j = 0; j <= m; ++j) line[static_cast<std::size_t>(j)] = departures_or_zero(j);

  std::vector<std::vector<Rational>> table(static_cast<std::size_t>(m + 1));
  auto at = [&](int a, int b) -> const Rational& {
    return table[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  };
  auto line_at = [&](int j) -> Rational { return j <= 0 ? Rational(0) : line[static_cast<std::size_t>(j)]; };

  for (int big_m = 0; big_m <= m; ++big_m) {
    auto& row = table[static_cast<std::size_t>(big_m)];
    row.assign(static_cast<std::size_t>(big_m + 1), Rational(0));
    for (int k = 1; k <= big_m; ++k) {
      if (k == big_m) {
        row[static_cast<std::size_t>(k)] = line_at(k);
        continue;
      }
      Rational sum = 0;
      // First chosen node inside the counted prefix.
      for (int i = 1; i <= k; ++i) {
        const int a = k - i - 1;
        const int b = big_m - i - 1;
        sum += 1 + line_at(i - 2) + (a <= 0 ? Rational(0) : at(a, b));
      }
      // First chosen node right after the prefix blocks node k.
      sum += line_at(k - 1);
      // First chosen node further right leaves a shorter segment.
      for (int i = k + 2; i <= big_m; ++i) sum += at(k, i - 2);
      row[static_cast<std::size_t>(k)] = sum / big_m;
    }
  }
  return table;
}

}  // namespace

Rational line_departures(int n) {
  if (n <= 0) return 0;
  Rational sum = 0;
  for (int k = 1; k <= n; ++k) sum += alternating_term(k) * (n - k + 1);
  return sum;
}

Rational partial_line_departures(int k, int m) {
  if (k > m) {
    throw std::invalid_argument("partial_line_departures: k=" + std::to_string(k) +
                                " exceeds m=" + std::to_string(m));
  }
  if (k <= 0) return 0;
  if (k == m) return line_departures(k);
  return partial_table(m)[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
}

Rational circle_departures(int n) {
  if (n < 1) throw std::invalid_argument("circle needs at least one node");
  if (n <= 2) return 1;
  return 1 + line_departures(n - 3);
}

Rational circle_ratio_closed_form(int n) {
  if (n < 4) throw std::invalid_argument("closed form requires n >= 4");
  Rational sum = 0;
  for (int k = 1; k <= n - 3; ++k) sum += alternating_term(k);
  Rational tail(power_of_two(static_cast<unsigned>(n - 3)), factorial(static_cast<unsigned>(n - 3)));
  tail /= n;
  return n % 2 == 0 ? Rational(sum - tail) : Rational(sum + tail);
}

Rational ratio_difference(int n) {
  if (n < 4) throw std::invalid_argument("ratio difference requires n >= 4");
  Rational mag(power_of_two(static_cast<unsigned>(n - 3)) * 2,
               factorial(static_cast<unsigned>(n - 3)) * n * (n + 2) * (n - 1));
  // (-1)^n * mag * (-1)
  return n % 2 == 0 ? Rational(-mag) : mag;
}

LimitConstant limit_constant(Rational tolerance) {
  if (tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
  // e^{-2} = sum_k (-2)^k / k!; stop once the next term is below 2 * tolerance.
  Rational series = 0;
  Rational term = 1;
  int k = 0;
  while (true) {
    series += term;
    ++k;
    term *= Rational(-2, k);
    const Rational next = term < 0 ? Rational(-term) : term;
    if (k >= 3 && next / 2 <= tolerance) {
      return {(1 - series) / 2, next / 2};
    }
  }
}

ParkingTable::ParkingTable(int max_n) {
  if (max_n < 0) throw std::invalid_argument("table size must be non-negative");
  rows_.reserve(static_cast<std::size_t>(max_n + 1));
  for (int n = 0; n <= max_n; ++n) {
    ParkingRow row;
    row.n = n;
    row.line = line_departures(n);
    if (n >= 1) {
      row.circle = circle_departures(n);
      row.line_ratio = row.line / n;
      row.circle_ratio = row.circle / n;
    }
    rows_.push_back(std::move(row));
  }
}

}  // namespace csma::parking
