#pragma once

// Exact expected numbers of transmissions per slot on fully occupied line
// segments and circles (discrete parking quantities).

#include "csma/rational.hpp"

#include <vector>

namespace csma::parking {

inline constexpr int kDefaultTableCap = 64;

/// Expected transmissions on a fully occupied line of n nodes, via the
/// alternating factorial closed form. Zero for n <= 0.
Rational line_departures(int n);

/// Expected transmissions out of the first k nodes of a fully occupied
/// line of m nodes (first-chosen-node recursion, memoised).
/// Zero for k <= 0; equals line_departures(k) when k == m.
/// Throws std::invalid_argument when k > m.
Rational partial_line_departures(int k, int m);

/// Expected transmissions on a fully occupied circle of n nodes:
/// 1 for n <= 2, otherwise 1 + line_departures(n - 3).
Rational circle_departures(int n);

/// circle_departures(n) / n through the telescoped alternating series.
/// Requires n >= 4.
Rational circle_ratio_closed_form(int n);

/// C(n+2)/(n+2) - C(n)/n in closed form. Requires n >= 4.
Rational ratio_difference(int n);

struct LimitConstant {
  Rational value;        // partial sum of the exponential series
  Rational error_bound;  // |value - (1 - e^-2)/2| <= error_bound
};

/// (1 - e^{-2}) / 2 from a truncated series for e^{-2}; the error bound is
/// the first omitted term, which dominates the alternating tail.
LimitConstant limit_constant(Rational tolerance = Rational(BigInt(1), BigInt("1000000000000000000000000000000")));

struct ParkingRow {
  int n = 0;
  Rational line;         // L_n
  Rational circle;       // C_n (0 for n == 0)
  Rational line_ratio;   // L_n / n (0 for n == 0)
  Rational circle_ratio; // C_n / n (0 for n == 0)
};

class ParkingTable {
 public:
  explicit ParkingTable(int max_n = kDefaultTableCap);

  int max_n() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  const ParkingRow& row(int n) const { return rows_.at(static_cast<std::size_t>(n)); }
  const std::vector<ParkingRow>& rows() const noexcept { return rows_; }

 private:
  std::vector<ParkingRow> rows_;
};

}  // namespace csma::parking
