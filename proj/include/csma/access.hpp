#pragma once

// Slot-level medium access: priority resolution d = phi(s, u), random and
// conditional ranking constructions, exact event probabilities by
// enumerating rankings, Monte Carlo estimates and worst-case occupancy
// search.

#include "csma/events.hpp"
#include "csma/rational.hpp"
#include "csma/rng.hpp"
#include "csma/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csma::access {

inline constexpr int kDefaultEnumerationCap = 10;
inline constexpr int kMaxFreeMaskBits = 20;

/// Priority permutation: rank(i) is node i's priority, 1 = highest.
class Ranking {
 public:
  Ranking() = default;
  /// ranks[i-1] = u_i. Throws std::invalid_argument unless a permutation of 1..n.
  explicit Ranking(std::vector<std::uint32_t> ranks);
  Ranking(std::initializer_list<std::uint32_t> ranks) : Ranking(std::vector<std::uint32_t>(ranks)) {}

  static Ranking identity(int n);
  /// order[r] = node with priority r+1.
  static Ranking from_order(std::span<const int> order);

  int size() const noexcept { return static_cast<int>(ranks_.size()); }
  std::uint32_t rank(int i) const { return ranks_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<std::uint32_t>& ranks() const noexcept { return ranks_; }
  /// Nodes sorted by priority.
  std::vector<int> order() const;

  std::string to_string() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;
  friend auto operator<=>(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::uint32_t> ranks_;
};

using TransmissionVector = std::vector<std::uint8_t>;

struct AccessOutcome {
  Ranking ranking;
  TransmissionVector transmissions;
};

/// Nodes are processed in priority order; an occupied node transmits iff
/// no neighbour is already transmitting.
TransmissionVector resolve(const Topology& t, const OccupancyState& s, const Ranking& u);

/// Allocation-free kernel behind resolve(): `order` lists nodes by
/// priority, `d` receives the transmissions (size n).
void resolve_in_order(const Topology& t, std::span<const std::uint8_t> s, std::span<const int> order,
                      std::span<std::uint8_t> d);

/// Uniform permutation by Fisher-Yates.
Ranking sample_ranking(int n, Rng& rng);

/// Fills `order` with a uniformly random arrangement of 1..n.
void sample_order(std::span<int> order, Rng& rng);

/// The choose-and-deactivate construction of a slot. Optionally
/// conditioned on u_first < u_second by treating the two as a pair drawn with
/// double weight that always yields `first`.
class AccessConstruction {
 public:
  AccessConstruction(const Topology& t, const OccupancyState& s);
  AccessConstruction(const Topology& t, const OccupancyState& s, int first, int second);

  bool finished() const noexcept { return chosen_ == n_; }
  /// Total choice weight; equals the number of unchosen nodes.
  int total_weight() const noexcept { return n_ - chosen_; }
  /// Available (node, weight) choices, in node order.
  void choices(std::vector<std::pair<int, int>>& out) const;
  void choose(int node);

  AccessOutcome outcome() const;

 private:
  const Topology* topo_;
  int n_;
  int chosen_ = 0;
  int pair_first_ = 0;
  int pair_second_ = 0;
  std::vector<std::uint8_t> occupied_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint8_t> picked_;
  std::vector<std::uint32_t> ranks_;
  std::vector<std::uint8_t> d_;
};

AccessOutcome sequential_process(const Topology& t, const OccupancyState& s, Rng& rng);

/// Law of sequential_process given u_i < u_j. Throws on i == j.
AccessOutcome conditional_ranking(const Topology& t, const OccupancyState& s, int i, int j, Rng& rng);

/// Exact distribution over (u, d).
using OutcomeLaw = std::map<std::pair<std::vector<std::uint32_t>, TransmissionVector>, Rational>;

/// Walks the full outcome tree of the construction with rational weights.
OutcomeLaw construction_law(const Topology& t, const OccupancyState& s);
OutcomeLaw conditional_construction_law(const Topology& t, const OccupancyState& s, int i, int j);

/// resolve() under a uniform ranking, optionally restricted to u_i < u_j
/// (pass i = j = 0 for no restriction).
OutcomeLaw uniform_resolve_law(const Topology& t, const OccupancyState& s, int i = 0, int j = 0);

void check_enumerable(const Topology& t, int cap);

/// Calls f(const SlotOutcome&) for every one of the n! rankings.
template <class F>
void for_each_outcome(const Topology& t, const OccupancyState& s, F&& f) {
  const int n = t.size();
  if (s.size() != n) throw std::invalid_argument("occupancy size does not match topology");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::vector<std::uint32_t> u(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> d(static_cast<std::size_t>(n));
  const auto& bits = s.bits();
  const SlotOutcome view{bits, u, d};
  do {
    for (int r = 0; r < n; ++r) u[static_cast<std::size_t>(order[static_cast<std::size_t>(r)] - 1)] = static_cast<std::uint32_t>(r + 1);
    resolve_in_order(t, bits, order, d);
    f(view);
  } while (std::next_permutation(order.begin(), order.end()));
}

/// Number of rankings (out of n!) for which the event holds.
std::uint64_t count_rankings(const Topology& t, const OccupancyState& s, const EventPredicate& event,
                             int cap = kDefaultEnumerationCap);

/// Sum over all n! rankings of 1{event} / n!.
Rational exact_event_probability(const Topology& t, const OccupancyState& s, const EventPredicate& event,
                                 int cap = kDefaultEnumerationCap);

/// Probability under a uniform mutual ranking of an isolated fully
/// occupied segment [1, k].
Rational segment_event_probability(int k, const EventPredicate& event, int cap = kDefaultEnumerationCap);

/// P(d_i = 1) for every node, from one enumeration pass.
std::vector<Rational> transmission_probabilities(const Topology& t, const OccupancyState& s,
                                                 int cap = kDefaultEnumerationCap);

Rational expected_departures(const Topology& t, const OccupancyState& s, int cap = kDefaultEnumerationCap);

/// Counts of each transmission mask (bit i-1 = node i) over all k!
/// rankings of a fully occupied line segment of k nodes.
std::vector<std::uint64_t> segment_transmission_histogram(int k, int cap = kDefaultEnumerationCap);

struct ProbabilityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;

  /// |mean - exact| in units of the standard error (infinite if the
  /// error is zero and the values differ).
  double z_score(double exact) const;
};

/// Binomial frequency estimate. Samples are drawn in fixed-size blocks,
/// block b from rng.substream(b), so the result depends only on the seed.
ProbabilityEstimate monte_carlo_probability(const Topology& t, const OccupancyState& s,
                                            const EventPredicate& event, std::uint64_t samples, const Rng& rng);

/// Occupancy with some nodes fixed and others left free.
class OccupancyMask {
 public:
  static constexpr std::int8_t kFree = -1;

  explicit OccupancyMask(int n) : cells_(static_cast<std::size_t>(n), kFree) {}
  /// Characters '0', '1', and '*' or '?' for free; commas ignored.
  static OccupancyMask parse(std::string_view text);

  int size() const noexcept { return static_cast<int>(cells_.size()); }
  OccupancyMask& fix(int i, bool occupied);
  bool is_free(int i) const { return cells_.at(static_cast<std::size_t>(i - 1)) == kFree; }
  int free_count() const noexcept;
  std::vector<int> free_nodes() const;
  /// Fills free nodes from the low bits of `bits` (first free node = bit 0).
  OccupancyState complete(std::uint64_t bits) const;
  std::string to_string() const;

 private:
  std::vector<std::int8_t> cells_;
};

struct WorstCase {
  Rational probability;
  OccupancyState state;
  std::uint64_t completions_checked = 0;
};

/// Minimum of exact_event_probability over every completion of `mask`
/// that satisfies `filter` (an occupancy-only event). The first minimiser
/// in completion order is reported. Throws std::invalid_argument if no
/// completion qualifies.
WorstCase worst_case_probability(const Topology& t, const OccupancyMask& mask, const EventPredicate& event,
                                 const EventPredicate& filter = EventPredicate::always(),
                                 int cap = kDefaultEnumerationCap);

}  // namespace csma::access
