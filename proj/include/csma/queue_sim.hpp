#pragma once

// Slotted-time simulation of the unsaturated network: exogenous arrivals,
// the queue recursion Q(n+1) = Q(n) - D(n) + xi(n), reshuffled and
// saturated variants, the multi-hop circle, Lyapunov drift estimates and
// a finite-horizon stability heuristic.

#include "csma/access.hpp"
#include "csma/rational.hpp"
#include "csma/rng.hpp"
#include "csma/topology.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csma::sim {

enum class ArrivalKind { Bernoulli, Poisson, Geometric, Deterministic };

std::string_view to_string(ArrivalKind kind);
ArrivalKind parse_arrival_kind(std::string_view text);

/// i.i.d. per-node, per-slot arrival counts with mean `lambda`
/// (or per_node[i-1] when given).
struct ArrivalModel {
  ArrivalKind kind = ArrivalKind::Bernoulli;
  double lambda = 0.0;
  std::vector<double> per_node;

  double rate(int i) const;
  bool homogeneous() const noexcept { return per_node.empty(); }
  /// E(xi^2) for node i at mean `mean`.
  double second_moment(double mean) const;
  /// One draw with the given mean; `slot` drives the deterministic kind.
  std::int64_t draw(double mean, std::uint64_t slot, Rng& rng) const;
  void validate(int n, double scale = 1.0) const;
};

enum class VariantKind { Standard, Reshuffle1, Reshuffle2, Reshuffle3, Saturated, MultiHop };

struct Variant {
  VariantKind kind = VariantKind::Standard;
  int hops = 1;  // m, multi-hop only

  static Variant standard() { return {}; }
  static Variant multi_hop(int m) { return {VariantKind::MultiHop, m}; }
  bool is_reshuffle() const noexcept {
    return kind == VariantKind::Reshuffle1 || kind == VariantKind::Reshuffle2 || kind == VariantKind::Reshuffle3;
  }
  friend bool operator==(const Variant&, const Variant&) = default;
};

/// "standard", "reshuffle1".."reshuffle3", "saturated", "multihop:<m>".
Variant parse_variant(std::string_view text);
std::string to_string(const Variant& v);

struct QueueState {
  std::vector<std::int64_t> q;

  QueueState() = default;
  explicit QueueState(std::vector<std::int64_t> values);
  QueueState(std::initializer_list<std::int64_t> values) : QueueState(std::vector<std::int64_t>(values)) {}
  static QueueState zeros(int n) { return QueueState(std::vector<std::int64_t>(static_cast<std::size_t>(n), 0)); }
  static QueueState uniform(int n, std::int64_t value) {
    return QueueState(std::vector<std::int64_t>(static_cast<std::size_t>(n), value));
  }

  int size() const noexcept { return static_cast<int>(q.size()); }
  std::int64_t operator[](int i) const { return q.at(static_cast<std::size_t>(i - 1)); }
  std::int64_t total() const noexcept;
  std::int64_t max() const noexcept;
  OccupancyState occupancy() const;

  friend bool operator==(const QueueState&, const QueueState&) = default;
};

enum class TraceLevel { None, Totals, Full };

TraceLevel parse_trace_level(std::string_view text);

struct SimConfig {
  Topology topology = Topology::circle(5);
  ArrivalModel arrivals;
  Variant variant;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<QueueState> initial;  // zeros when absent
  TraceLevel trace = TraceLevel::None;

  QueueState initial_state() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Everything that happened in one slot. `transmissions` is d;
/// `departures` counts packets that actually left a queue (they differ
/// only in the saturated variant, where empty nodes still compete).
struct SlotTrace {
  std::uint64_t slot = 0;
  OccupancyState occupancy;
  access::Ranking ranking;
  access::TransmissionVector transmissions;
  std::vector<std::int64_t> departures;
  std::vector<std::int64_t> arrivals;   // exogenous
  std::vector<std::int64_t> forwarded;  // multi-hop internal arrivals
  std::int64_t total_queue = 0;
  std::int64_t max_queue = 0;
  BigInt lyapunov = 0;  // of the post-slot state; filled by run() when tracing
  std::vector<std::int64_t> queues;  // post-slot, filled by run() at TraceLevel::Full
};

/// Random inputs of one slot, drawn by step() or supplied by tests.
struct SlotInputs {
  std::optional<std::vector<int>> reshuffle;  // reshuffle[p-1] = node whose queue moves to p
  access::Ranking ranking;
  std::vector<std::uint8_t> forward;  // multi-hop: 1 = packet moves to i+1
  std::vector<std::int64_t> arrivals;
};

/// Deterministic part of a slot: reshuffle, access, forwarding, arrivals.
QueueState advance(const QueueState& state, const SimConfig& cfg, const SlotInputs& in, SlotTrace* trace = nullptr);

/// One slot with inputs drawn from rng.
QueueState step(const QueueState& state, const SimConfig& cfg, Rng& rng, std::uint64_t slot = 0,
                SlotTrace* trace = nullptr);

/// Source node for every position after a reshuffle. Version 1 permutes
/// all queues, version 2 the non-empty ones, version 3 the queues inside
/// each occupied segment.
std::vector<int> reshuffle_sources(const QueueState& state, const Variant& variant, const Topology& t, Rng& rng);

QueueState apply_reshuffle(const QueueState& state, const Variant& variant, const Topology& t, Rng& rng);

/// Multi-hop slot; requires a circle and cfg.variant.hops == m.
QueueState multi_hop_step(const QueueState& state, int m, const SimConfig& cfg, Rng& rng, std::uint64_t slot = 0,
                          SlotTrace* trace = nullptr);

/// Sum over neighbouring pairs of (q_i + q_{i+1})^2 (with wraparound on
/// the circle), exactly.
BigInt lyapunov_value(const QueueState& state, const Topology& t);

struct DriftEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
};

/// Monte Carlo estimate of E[L(Q(1)) - L(Q(0)) | Q(0) = state];
/// replication r uses rng.substream(r).
DriftEstimate measure_drift(const SimConfig& cfg, const QueueState& state, std::uint64_t replications, const Rng& rng);

/// One-step drift bound from the neighbour-pair argument:
/// 2 * sum_i w_i Q_i + C with w_i = 4 lambda - 3/2 (2 lambda - 1 at line
/// ends) and C = 2 sum E xi^2 + 2 N lambda^2 + 4 N. Homogeneous,
/// standard variant only.
double lyapunov_drift_bound(const SimConfig& cfg, const QueueState& state);

enum class Classification { StableEvidence, UnstableEvidence, Inconclusive };

std::string_view to_string(Classification c);

struct WindowStat {
  std::uint64_t first_slot = 0;
  std::uint64_t slots = 0;
  double mean_total = 0.0;
  std::int64_t max_total = 0;
};

inline constexpr int kVerdictWindows = 20;
inline constexpr double kVerdictSigmas = 3.0;
inline constexpr double kUnstableGrowthFactor = 10.0;
inline constexpr double kStableQueueMultiple = 25.0;

struct StabilityVerdict {
  Classification classification = Classification::Inconclusive;
  double growth_rate = 0.0;       // packets per slot, total queue, second half
  double growth_std_error = 0.0;
  double stability_gap = 0.0;     // distance of the load to the reference capacity
  double queue_bound = 0.0;       // max admissible window mean for StableEvidence
  double max_window_mean = 0.0;
  std::int64_t initial_total = 0;
  std::int64_t final_total = 0;
  std::string reason;
};

/// Reference per-node capacity: C_N/N on the circle, min(L_N/N, 1/2) for
/// the reshuffled line and 1/2 (largest schedulable load) otherwise.
Rational reference_capacity(const Topology& t, const Variant& v);

/// Capacity minus load. For per-node rates, the smallest slack of the
/// pairwise condition lambda_{i-1} + 2 lambda_i + lambda_{i+1} < 3/2
/// (lambda_1 + lambda_2 < 1 at line ends), scaled to per-node units.
double stability_gap(const SimConfig& cfg);

/// Verdict from window statistics of the total queue: slope regression over
/// the second half of the windows.
StabilityVerdict classify(const std::vector<WindowStat>& windows, std::int64_t initial_total,
                          std::int64_t final_total, double gap, int n);

struct RunResult {
  QueueState final_state;
  std::vector<WindowStat> windows;
  std::int64_t max_queue = 0;
  std::int64_t arrivals_total = 0;   // exogenous
  std::int64_t forwarded_total = 0;  // multi-hop internal
  std::int64_t departures_total = 0;
  std::vector<double> per_node_throughput;  // transmissions per slot
  std::vector<std::int64_t> per_node_departures;
  StabilityVerdict verdict;
};

using TraceObserver = std::function<void(const SlotTrace&)>;

/// Runs the configured variant for cfg.horizon slots from cfg.seed. The
/// observer, if any, sees every slot (fields filled per cfg.trace).
RunResult run(const SimConfig& cfg, const TraceObserver& observer = {});

/// Per-node transmission frequency with every node permanently competing.
std::vector<access::ProbabilityEstimate> saturated_throughput(const Topology& t, std::uint64_t slots, const Rng& rng);

}  // namespace csma::sim
