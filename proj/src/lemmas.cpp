#include "csma/lemmas.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <sstream>

namespace csma::lemmas {

using access::kDefaultEnumerationCap;
using parking::circle_departures;
using parking::line_departures;

std::size_t SuiteResult::failures() const noexcept {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

bool LemmaReport::ok() const noexcept {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

std::size_t LemmaReport::total_checks() const noexcept {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.checks.size();
  return n;
}

std::size_t LemmaReport::total_failures() const noexcept {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.failures();
  return n;
}

namespace {

std::string f(const Rational& r) { return to_fraction_string(r); }

Rational ratio(const Rational& x, int n) { return x / n; }

// Enumeration cap passed to the engine: the suites bound their own sizes.
int engine_cap(int cap) { return std::max(cap, kDefaultEnumerationCap); }

std::string node_set(std::uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; mask >> i; ++i) {
    if (!((mask >> i) & 1U)) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

// Transmission-mask histograms of fully occupied segments, by length.
class SegmentHistograms {
 public:
  explicit SegmentHistograms(int cap) : hist_(static_cast<std::size_t>(std::max(cap, 0) + 1)) {
    for (int k = 1; k <= cap; ++k)
      hist_[static_cast<std::size_t>(k)] = access::segment_transmission_histogram(k, engine_cap(cap));
  }

  // P_k(d_i = 1 for every i in `nodes`), bit i-1 = node i.
  Rational all_transmit(int k, std::uint32_t nodes) const {
    const auto& h = hist_.at(static_cast<std::size_t>(k));
    std::uint64_t hits = 0;
    for (std::size_t m = 0; m < h.size(); ++m)
      if ((m & nodes) == nodes) hits += h[m];
    return Rational(BigInt(hits), factorial(static_cast<unsigned>(k)));
  }

  // Expected transmissions among the first k nodes of an m-segment.
  Rational prefix_departures(int k, int m) const {
    const auto& h = hist_.at(static_cast<std::size_t>(m));
    const std::size_t prefix = (std::size_t{1} << k) - 1;
    BigInt sum = 0;
    for (std::size_t mask = 0; mask < h.size(); ++mask)
      sum += BigInt(h[mask]) * std::popcount(mask & prefix);
    return Rational(sum, factorial(static_cast<unsigned>(m)));
  }

 private:
  std::vector<std::vector<std::uint64_t>> hist_;
};

template <class Body>
SuiteResult timed(std::string name, std::string claim, Body&& body) {
  SuiteResult r;
  r.name = std::move(name);
  r.claim = std::move(claim);
  const auto start = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.checks.empty() && r.skipped.empty()) r.skipped = "no instances within the cap";
  return r;
}

std::vector<Topology> topologies(int n) { return {Topology::circle(n), Topology::line(n)}; }

}  // namespace

// ------------------------------------------------------------ closed forms

SuiteResult suite_line_monotonicity(int table_cap) {
  return timed("line-ratio-monotone", "L_n/n is non-increasing for n >= 3", [&](SuiteResult& r) {
    for (int n = 3; n < table_cap; ++n) {
      const Rational a = ratio(line_departures(n), n);
      const Rational b = ratio(line_departures(n + 1), n + 1);
      r.add(a >= b, "L_" + std::to_string(n) + "/" + std::to_string(n) + " = " + f(a) + " >= L_" +
                        std::to_string(n + 1) + "/" + std::to_string(n + 1) + " = " + f(b));
    }
  });
}

SuiteResult suite_subadditivity(int table_cap) {
  return timed("line-subadditive", "L_{k+m} <= L_k + L_m for k, m >= 1", [&](SuiteResult& r) {
    for (int total = 2; total <= table_cap; ++total) {
      const Rational whole = line_departures(total);
      for (int k = 1; k <= total / 2; ++k) {
        const Rational parts = line_departures(k) + line_departures(total - k);
        r.add(whole <= parts, "L_" + std::to_string(total) + " = " + f(whole) + " <= L_" + std::to_string(k) + " + L_" +
                                  std::to_string(total - k) + " = " + f(parts));
      }
    }
  });
}

SuiteResult suite_circle_below_line(int table_cap) {
  return timed("circle-below-line", "C_n <= L_n for n >= 1", [&](SuiteResult& r) {
    for (int n = 1; n <= table_cap; ++n) {
      const Rational c = circle_departures(n);
      const Rational l = line_departures(n);
      r.add(c <= l, "C_" + std::to_string(n) + " = " + f(c) + " <= L_" + std::to_string(n) + " = " + f(l));
    }
  });
}

SuiteResult suite_circle_lower_bound(int table_cap) {
  return timed("circle-ratio-lower-bound", "C_n/n >= 2/5 for n >= 4, with equality only at n = 5",
               [&](SuiteResult& r) {
                 const Rational floor(2, 5);
                 for (int n = 4; n <= table_cap; ++n) {
                   const Rational c = ratio(circle_departures(n), n);
                   const bool ok = n == 5 ? c == floor : c > floor;
                   r.add(ok, "C_" + std::to_string(n) + "/" + std::to_string(n) + " = " + f(c) +
                                 (n == 5 ? " == 2/5" : " > 2/5"));
                 }
               });
}

SuiteResult suite_circle_closed_form(int table_cap) {
  return timed("circle-ratio-closed-form", "telescoped series equals C_n/n for n >= 4", [&](SuiteResult& r) {
    for (int n = 4; n <= table_cap; ++n) {
      const Rational direct = ratio(circle_departures(n), n);
      const Rational closed = parking::circle_ratio_closed_form(n);
      r.add(direct == closed, "n=" + std::to_string(n) + ": " + f(closed) + " == " + f(direct));
    }
  });
}

SuiteResult suite_alternating_ratios(int table_cap) {
  return timed("circle-ratio-alternating",
               "C_{n+2}/(n+2) - C_n/n matches the closed difference; even ratios fall and odd ratios rise "
               "toward (1-e^-2)/2",
               [&](SuiteResult& r) {
                 const auto limit = parking::limit_constant(Rational(BigInt(1), pow(BigInt(10), 200)));
                 const Rational lo = limit.value - limit.error_bound;
                 const Rational hi = limit.value + limit.error_bound;
                 for (int n = 4; n + 2 <= table_cap; ++n) {
                   const Rational a = ratio(circle_departures(n), n);
                   const Rational b = ratio(circle_departures(n + 2), n + 2);
                   const Rational diff = b - a;
                   const Rational closed = parking::ratio_difference(n);
                   const bool even = n % 2 == 0;
                   const bool sign_ok = even ? diff < 0 : diff > 0;
                   const bool side_ok = even ? a > hi : a < lo;
                   r.add(diff == closed && sign_ok && side_ok,
                         "n=" + std::to_string(n) + ": difference " + f(diff) + (even ? " < 0" : " > 0") +
                             ", closed form " + f(closed) + ", C_n/n " + to_decimal_string(a, 15) +
                             (even ? " above" : " below") + " the limit");
                 }
               });
}

SuiteResult suite_limit_constant() {
  return timed("limit-constant", "(1-e^-2)/2 to 12 digits; C_20/20 and C_21/21 within 1e-9", [&](SuiteResult& r) {
    const auto limit = parking::limit_constant();
    const std::string digits = to_decimal_string(limit.value, 12);
    r.add(digits == "0.432332358382", "(1-e^-2)/2 = " + digits + " (error bound " + to_decimal_string(limit.error_bound, 3) + ")");
    const Rational tol(BigInt(1), BigInt(1'000'000'000));
    for (int n : {20, 21}) {
      const Rational c = ratio(circle_departures(n), n);
      Rational gap = c - limit.value;
      if (gap < 0) gap = -gap;
      const bool ok = gap + limit.error_bound < tol;
      r.add(ok, "|C_" + std::to_string(n) + "/" + std::to_string(n) + " - limit| = " + to_decimal_string(gap, 4) +
                    " < 1e-9");
    }
  });
}

// ------------------------------------------------------------- enumeration

SuiteResult suite_line_oracle(int cap) {
  return timed("departures-oracle", "closed-form L_n and C_n equal enumerated expected departures",
               [&](SuiteResult& r) {
                 for (int n = 1; n <= cap; ++n) {
                   const auto all = OccupancyState::all(n, true);
                   const Rational line = access::expected_departures(Topology::line(n), all, engine_cap(cap));
                   r.add(line == line_departures(n),
                         "line n=" + std::to_string(n) + ": enumerated " + f(line) + " == L_n " + f(line_departures(n)));
                   const Rational circle = access::expected_departures(Topology::circle(n), all, engine_cap(cap));
                   r.add(circle == circle_departures(n), "circle n=" + std::to_string(n) + ": enumerated " + f(circle) +
                                                             " == C_n " + f(circle_departures(n)));
                 }
               });
}

SuiteResult suite_partial_segments(int cap) {
  return timed("partial-segment",
               "L_{k:m} from the recursion equals enumeration and is at most L_k, for 1 <= k <= m",
               [&](SuiteResult& r) {
                 const SegmentHistograms hist(cap);
                 for (int m = 1; m <= cap; ++m) {
                   for (int k = 1; k <= m; ++k) {
                     const Rational rec = parking::partial_line_departures(k, m);
                     const Rational enumerated = hist.prefix_departures(k, m);
                     const Rational lk = line_departures(k);
                     r.add(rec == enumerated && rec <= lk, "L_{" + std::to_string(k) + ":" + std::to_string(m) +
                                                               "} = " + f(rec) + " (enumerated " + f(enumerated) +
                                                               ") <= L_" + std::to_string(k) + " = " + f(lk));
                   }
                 }
               });
}

SuiteResult suite_resolve_invariants(int cap) {
  return timed("resolve-invariants",
               "every resolution transmits only from occupied nodes, never from two neighbours, and is maximal",
               [&](SuiteResult& r) {
                 const int top = std::min(cap, 8);
                 for (int n = 1; n <= top; ++n) {
                   for (const auto& t : topologies(n)) {
                     std::uint64_t outcomes = 0;
                     std::uint64_t bad = 0;
                     for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                       const auto s = OccupancyState::from_mask(n, mask);
                       access::for_each_outcome(t, s, [&](const SlotOutcome& o) {
                         ++outcomes;
                         for (int i = 1; i <= n; ++i) {
                           const auto ui = static_cast<std::size_t>(i - 1);
                           bool blocked = false;
                           for (int j : t.neighbors(i)) {
                             const auto uj = static_cast<std::size_t>(j - 1);
                             if (o.d[uj]) blocked = true;
                             if (o.d[ui] && o.d[uj]) {
                               ++bad;
                               return;
                             }
                           }
                           if ((o.d[ui] && !o.s[ui]) || (o.s[ui] && !o.d[ui] && !blocked)) {
                             ++bad;
                             return;
                           }
                         }
                       });
                     }
                     r.add(bad == 0, t.describe() + ": " + std::to_string(outcomes) + " outcomes, " +
                                         std::to_string(bad) + " violations");
                   }
                 }
               });
}

SuiteResult suite_friend_foe(int cap) {
  return timed("friend-foe",
               "for mutual friends L in [1,k]: P_k(d_L = 1) <= P_{k+1}, P_{k+2} when k+1 is a friend, >= when a foe",
               [&](SuiteResult& r) {
                 if (cap < 3) return;
                 const SegmentHistograms hist(cap);
                 for (int k = 1; k + 2 <= cap; ++k) {
                   for (int parity = 0; parity < 2; ++parity) {
                     std::vector<int> nodes;
                     for (int i = 1 + parity; i <= k; i += 2) nodes.push_back(i);
                     const bool friend_of_next = friend_parity(nodes.empty() ? 1 : nodes.front(), k + 1) == Parity::Friend;
                     for (std::uint32_t pick = 1; pick < (1U << nodes.size()); ++pick) {
                       std::uint32_t set = 0;
                       for (std::size_t b = 0; b < nodes.size(); ++b)
                         if ((pick >> b) & 1U) set |= 1U << (nodes[b] - 1);
                       const Rational p0 = hist.all_transmit(k, set);
                       const Rational p1 = hist.all_transmit(k + 1, set);
                       const Rational p2 = hist.all_transmit(k + 2, set);
                       const bool ok = friend_of_next ? (p0 <= p1 && p0 <= p2) : (p0 >= p1 && p0 >= p2);
                       const char* op = friend_of_next ? " <= " : " >= ";
                       r.add(ok, "k=" + std::to_string(k) + " L=" + node_set(set) + (friend_of_next ? " friend: " : " foe: ") +
                                     "P_k " + f(p0) + op + "P_{k+1} " + f(p1) + ", P_k" + op + "P_{k+2} " + f(p2));
                     }
                   }
                 }
               });
}

SuiteResult suite_edge_bounds(int cap) {
  return timed("segment-edge",
               "P_k(d_1 = 1) >= 1/2; P_k(d_1 = 1) + P_k(d_2 = 1) = 1 with P_k(d_1 = 1) >= P_k(d_2 = 1) for k >= 2",
               [&](SuiteResult& r) {
                 const SegmentHistograms hist(cap);
                 const Rational half(1, 2);
                 for (int k = 1; k <= cap; ++k) {
                   const Rational p1 = hist.all_transmit(k, 1U);
                   if (k == 1) {
                     r.add(p1 >= half, "k=1: P(d_1) = " + f(p1) + " >= 1/2");
                     continue;
                   }
                   const Rational p2 = hist.all_transmit(k, 2U);
                   r.add(p1 >= half && p1 + p2 == 1 && p1 >= p2, "k=" + std::to_string(k) + ": P(d_1) = " + f(p1) +
                                                                     ", P(d_2) = " + f(p2) + ", sum " + f(p1 + p2));
                 }
               });
}

SuiteResult suite_conditional_priority(int cap) {
  return timed("conditional-priority",
               "with s_{i-1} = s_i = s_{i+1} = 1: P(d_{i-1} = 1 | u_{i+1} < u_{i+2}) >= "
               "P(d_{i-1} = 1 | u_{i+1} > u_{i+2}), circle n >= 4 and line",
               [&](SuiteResult& r) {
                 const int top = std::min(cap, 8);
                 for (int n = 4; n <= top; ++n) {
                   for (const auto& t : topologies(n)) {
                     // Node triples (i-1, i, i+1, i+2) as 1-based ids; on the line all four must exist.
                     std::vector<std::array<int, 4>> sites;
                     for (int i = 1; i <= n; ++i) {
                       if (t.is_circle()) {
                         sites.push_back({t.wrap(i - 1), i, t.wrap(i + 1), t.wrap(i + 2)});
                       } else if (i >= 2 && i + 2 <= n) {
                         sites.push_back({i - 1, i, i + 1, i + 2});
                       }
                     }
                     const Rational half_total(factorial(static_cast<unsigned>(n)) / 2);
                     for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                       const auto s = OccupancyState::from_mask(n, mask);
                       std::vector<std::size_t> active;
                       for (std::size_t k = 0; k < sites.size(); ++k) {
                         const auto& q = sites[k];
                         if (s.occupied(q[0]) && s.occupied(q[1]) && s.occupied(q[2])) active.push_back(k);
                       }
                       if (active.empty()) continue;
                       std::vector<std::uint64_t> below(sites.size(), 0), above(sites.size(), 0);
                       access::for_each_outcome(t, s, [&](const SlotOutcome& o) {
                         for (std::size_t k : active) {
                           const auto& q = sites[k];
                           if (!o.d[static_cast<std::size_t>(q[0] - 1)]) continue;
                           if (o.u[static_cast<std::size_t>(q[2] - 1)] < o.u[static_cast<std::size_t>(q[3] - 1)])
                             ++below[k];
                           else
                             ++above[k];
                         }
                       });
                       for (std::size_t k : active) {
                         const Rational a = Rational(BigInt(below[k])) / half_total;
                         const Rational b = Rational(BigInt(above[k])) / half_total;
                         r.add(a >= b, t.describe() + " i=" + std::to_string(sites[k][1]) + " s=" + s.to_string() +
                                           ": " + f(a) + " >= " + f(b));
                       }
                     }
                   }
                 }
               });
}

SuiteResult suite_pair_bound(int cap) {
  return timed("neighbour-pair-bound",
               "with s_{i-1} = s_i = 1: P(d_{i-1} = 0, d_i = 0) <= 1/4, circle n >= 4 and line", [&](SuiteResult& r) {
                 const int top = std::min(cap, 8);
                 const Rational quarter(1, 4);
                 for (int n = 2; n <= top; ++n) {
                   for (const auto& t : topologies(n)) {
                     if (t.is_circle() && n < 4) continue;
                     const int first = t.is_circle() ? 1 : 2;
                     Rational worst = 0;
                     std::string where = "-";
                     std::uint64_t cases = 0;
                     for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                       const auto s = OccupancyState::from_mask(n, mask);
                       std::vector<int> pairs;
                       for (int i = first; i <= n; ++i)
                         if (s.occupied(t.wrap(i - 1)) && s.occupied(i)) pairs.push_back(i);
                       if (pairs.empty()) continue;
                       std::vector<std::uint64_t> silent(pairs.size(), 0);
                       access::for_each_outcome(t, s, [&](const SlotOutcome& o) {
                         for (std::size_t k = 0; k < pairs.size(); ++k) {
                           const int i = pairs[k];
                           if (!o.d[static_cast<std::size_t>(t.wrap(i - 1) - 1)] && !o.d[static_cast<std::size_t>(i - 1)])
                             ++silent[k];
                         }
                       });
                       const BigInt total = factorial(static_cast<unsigned>(n));
                       for (std::size_t k = 0; k < pairs.size(); ++k) {
                         ++cases;
                         const Rational p{BigInt(silent[k]), total};
                         if (p > quarter) {
                           r.add(false, t.describe() + " i=" + std::to_string(pairs[k]) + " s=" + s.to_string() +
                                            ": P = " + f(p) + " > 1/4");
                         }
                         if (where == "-" || p > worst) {
                           worst = p;
                           where = "i=" + std::to_string(pairs[k]) + " s=" + s.to_string();
                         }
                       }
                     }
                     r.add(worst <= quarter, t.describe() + ": " + std::to_string(cases) + " (s, i) cases, largest " +
                                                 f(worst) + " at " + where + " <= 1/4");
                   }
                 }
               });
}

SuiteResult suite_isolated_pair(int cap) {
  return timed("isolated-pair", "an occupied pair with idle borders has exactly one transmitter", [&](SuiteResult& r) {
    const int top = std::min(cap, 8);
    for (int n = 2; n <= top; ++n) {
      for (const auto& t : topologies(n)) {
        if (t.is_circle() && n < 3) continue;
        const int last = t.is_circle() ? n : n - 1;
        std::uint64_t cases = 0;
        std::uint64_t bad = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          const auto s = OccupancyState::from_mask(n, mask);
          for (int i = 1; i <= last; ++i) {
            const int j = t.wrap(i + 1);
            if (!s.occupied(i) || !s.occupied(j)) continue;
            bool isolated = true;
            if (t.is_circle() || i > 1) isolated = isolated && !s.occupied(t.wrap(i - 1));
            if (t.is_circle() || j < n) isolated = isolated && !s.occupied(t.wrap(j + 1));
            if (!isolated) continue;
            ++cases;
            const auto one = (EventPredicate::transmits(i) && EventPredicate::silent(j)) ||
                             (EventPredicate::silent(i) && EventPredicate::transmits(j));
            if (access::count_rankings(t, s, one, engine_cap(cap)) != factorial(static_cast<unsigned>(n))) ++bad;
          }
        }
        r.add(bad == 0, t.describe() + ": " + std::to_string(cases) + " isolated pairs, " + std::to_string(bad) +
                            " with other than one transmitter");
      }
    }
  });
}

SuiteResult suite_golden_constants(int cap) {
  struct Golden {
    int k;
    const char* event;
    Rational expected;
  };
  const std::vector<Golden> table = {
      {3, "d2=1", Rational(1, 3)},       {5, "d2=1", Rational(11, 30)},      {7, "d4=1", Rational(179, 420)},
      {5, "d2=1 & d4=1", Rational(1, 5)}, {4, "d2=1 & d4=1", Rational(3, 8)}, {3, "d1=1 & d3=1", Rational(2, 3)},
      {4, "d1=1 & d3=1", Rational(3, 8)},
  };
  return timed("proof-constants", "segment probabilities used by the threshold arguments", [&](SuiteResult& r) {
    for (const auto& g : table) {
      if (g.k > cap) continue;
      const auto event = EventPredicate::parse(g.event);
      const Rational p = access::segment_event_probability(g.k, event, engine_cap(cap));
      r.add(p == g.expected, "P_" + std::to_string(g.k) + "(" + g.event + ") = " + f(p) + " == " + f(g.expected));
    }
  });
}

SuiteResult suite_worst_case(int cap) {
  return timed("worst-occupancy", "smallest middle-node transmission probability over partial occupancies",
               [&](SuiteResult& r) {
                 if (cap >= 9) {
                   // Nodes 2..6 occupied on a 9-circle; the others free. Target node 4.
                   const auto mask = access::OccupancyMask::parse("*11111***");
                   const auto wc = access::worst_case_probability(Topology::circle(9), mask, EventPredicate::transmits(4),
                                                                  EventPredicate::always(), engine_cap(cap));
                   bool middle_of_seven = false;
                   for (const auto& seg : segments(Topology::circle(9), wc.state)) {
                     const auto nodes = segment_nodes(Topology::circle(9), seg);
                     if (!seg.full_circle && nodes.size() == 7 && nodes[3] == 4) middle_of_seven = true;
                   }
                   r.add(wc.probability == Rational(179, 420) && middle_of_seven,
                         "circle 9, mask " + mask.to_string() + ", d4=1: min " + f(wc.probability) + " at s=" +
                             wc.state.to_string() + " over " + std::to_string(wc.completions_checked) + " completions");
                 }
                 if (cap >= 8) {
                   // Nodes 2..4 occupied on an 8-circle with node 1 or node 5 idle. Target node 3.
                   const auto mask = access::OccupancyMask::parse("*111****");
                   const auto filter = EventPredicate::idle(1) || EventPredicate::idle(5);
                   const auto wc = access::worst_case_probability(Topology::circle(8), mask, EventPredicate::transmits(3),
                                                                  filter, engine_cap(cap));
                   r.add(wc.probability == Rational(1, 3),
                         "circle 8, mask " + mask.to_string() + ", filter " + filter.to_string() + ", d3=1: min " +
                             f(wc.probability) + " at s=" + wc.state.to_string());
                 }
               });
}

SuiteResult suite_construction_laws(int cap) {
  return timed("construction-laws",
               "the choose-and-deactivate construction has the law of a uniform ranking, and the pair-doubling "
               "construction the law conditioned on u_i < u_j",
               [&](SuiteResult& r) {
                 for (int n = 1; n <= std::min(cap, 6); ++n) {
                   for (const auto& t : topologies(n)) {
                     std::uint64_t states = 0;
                     std::uint64_t bad = 0;
                     for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                       const auto s = OccupancyState::from_mask(n, mask);
                       ++states;
                       if (access::construction_law(t, s) != access::uniform_resolve_law(t, s)) ++bad;
                     }
                     r.add(bad == 0, t.describe() + " unconditional: " + std::to_string(states) + " states, " +
                                         std::to_string(bad) + " mismatches");
                   }
                 }
                 for (int n = 2; n <= std::min(cap, 5); ++n) {
                   for (const auto& t : topologies(n)) {
                     std::uint64_t cases = 0;
                     std::uint64_t bad = 0;
                     for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                       const auto s = OccupancyState::from_mask(n, mask);
                       for (int i = 1; i <= n; ++i) {
                         for (int j = 1; j <= n; ++j) {
                           if (i == j) continue;
                           ++cases;
                           if (access::conditional_construction_law(t, s, i, j) !=
                               access::uniform_resolve_law(t, s, i, j))
                             ++bad;
                         }
                       }
                     }
                     r.add(bad == 0, t.describe() + " conditional: " + std::to_string(cases) + " (s, i, j) cases, " +
                                         std::to_string(bad) + " mismatches");
                   }
                 }
               });
}

SuiteResult suite_monte_carlo(int cap, std::uint64_t seed, std::uint64_t samples) {
  struct Case {
    Topology t;
    const char* state;
    const char* event;
  };
  const std::vector<Case> cases = {
      {Topology::line(3), "111", "d2=1"},
      {Topology::line(5), "11111", "d2=1"},
      {Topology::line(7), "1111111", "d4=1"},
      {Topology::circle(5), "11111", "d1=1"},
      {Topology::circle(6), "110111", "d1=1 & u3<u4"},
      {Topology::circle(8), "11101101", "!d2=1 & !d3=1"},
      {Topology::line(9), "111111111", "d1=1 | d9=1"},
  };
  return timed("monte-carlo-consistency", "seeded estimates within 5 standard errors of the exact value",
               [&](SuiteResult& r) {
                 const Rng base(seed);
                 std::uint64_t id = 0;
                 for (const auto& c : cases) {
                   ++id;
                   if (c.t.size() > cap) continue;
                   const auto s = OccupancyState::parse(c.state);
                   const auto event = EventPredicate::parse(c.event);
                   const Rational exact = access::exact_event_probability(c.t, s, event, engine_cap(cap));
                   const auto est = access::monte_carlo_probability(c.t, s, event, samples, base.substream(id));
                   const double z = est.z_score(to_double(exact));
                   std::ostringstream line;
                   line << c.t.describe() << " s=" << c.state << " " << c.event << ": exact " << f(exact)
                        << ", estimate " << est.mean << " +- " << est.std_error << " (z = " << z << ")";
                   r.add(z <= 5.0, line.str());
                 }
               });
}

// ------------------------------------------------------------------ report

LemmaReport verify_lemmas(const LemmaOptions& options, const SuiteObserver& observer) {
  if (options.cap < 1) throw std::invalid_argument("lemma cap must be at least 1");
  if (options.cap > kDefaultEnumerationCap)
    throw std::invalid_argument("lemma cap " + std::to_string(options.cap) + " exceeds the enumeration cap " +
                                std::to_string(kDefaultEnumerationCap));
  if (options.table_cap < 4) throw std::invalid_argument("table cap must be at least 4");
  LemmaReport report;
  report.options = options;
  const auto push = [&](SuiteResult r) {
    if (observer) observer(r);
    report.suites.push_back(std::move(r));
  };
  const int cap = options.cap;
  const int table = options.table_cap;
  push(suite_line_monotonicity(table));
  push(suite_subadditivity(table));
  push(suite_circle_below_line(table));
  push(suite_circle_lower_bound(table));
  push(suite_circle_closed_form(table));
  push(suite_alternating_ratios(table));
  push(suite_limit_constant());
  push(suite_line_oracle(cap));
  push(suite_partial_segments(cap));
  push(suite_resolve_invariants(cap));
  push(suite_friend_foe(cap));
  push(suite_edge_bounds(cap));
  push(suite_conditional_priority(cap));
  push(suite_pair_bound(cap));
  push(suite_isolated_pair(cap));
  push(suite_golden_constants(cap));
  push(suite_worst_case(cap));
  push(suite_construction_laws(cap));
  push(suite_monte_carlo(cap, options.seed, options.mc_samples));
  return report;
}

std::string render_report(const LemmaReport& report, bool verbose) {
  std::ostringstream out;
  out << "lemma suites: cap " << report.options.cap << ", table cap " << report.options.table_cap << "\n";
  for (const auto& s : report.suites) {
    const char* status = !s.skipped.empty() ? "SKIP" : (s.ok() ? "PASS" : "FAIL");
    out << "[" << status << "] " << s.name << ": " << s.claim << " (" << s.checks.size() << " checks";
    if (s.failures()) out << ", " << s.failures() << " failed";
    out << ")";
    if (!s.skipped.empty()) out << " - " << s.skipped;
    out << "\n";
    for (const auto& c : s.checks)
      if (verbose || !c.passed) out << "    " << (c.passed ? "ok   " : "FAIL ") << c.text << "\n";
  }
  out << (report.ok() ? "all suites passed" : "violations found") << ": " << report.total_checks() << " checks, "
      << report.total_failures() << " failed\n";
  return out.str();
}

}  // namespace csma::lemmas
