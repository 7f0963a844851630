#include "csma/queue_sim.hpp"

#include "csma/parking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace csma::sim {

namespace {

constexpr std::int64_t kQueueLimit = std::numeric_limits<std::int64_t>::max() / 4;

__extension__ typedef __int128 i128;

}  // namespace

// ---------------------------------------------------------------- arrivals

std::string_view to_string(ArrivalKind kind) {
  switch (kind) {
    case ArrivalKind::Bernoulli:
      return "bernoulli";
    case ArrivalKind::Poisson:
      return "poisson";
    case ArrivalKind::Geometric:
      return "geometric";
    case ArrivalKind::Deterministic:
      return "deterministic";
  }
  return "?";
}

ArrivalKind parse_arrival_kind(std::string_view text) {
  if (text == "bernoulli") return ArrivalKind::Bernoulli;
  if (text == "poisson") return ArrivalKind::Poisson;
  if (text == "geometric") return ArrivalKind::Geometric;
  if (text == "deterministic") return ArrivalKind::Deterministic;
  throw std::invalid_argument("unknown arrival model '" + std::string(text) + "'");
}

double ArrivalModel::rate(int i) const {
  return per_node.empty() ? lambda : per_node.at(static_cast<std::size_t>(i - 1));
}

double ArrivalModel::second_moment(double mean) const {
  switch (kind) {
    case ArrivalKind::Bernoulli:
      return mean;
    case ArrivalKind::Poisson:
      return mean + mean * mean;
    case ArrivalKind::Geometric:
      return mean + 2.0 * mean * mean;
    case ArrivalKind::Deterministic: {
      const double a = std::floor(mean);
      const double f = mean - a;
      return (1.0 - f) * a * a + f * (a + 1.0) * (a + 1.0);
    }
  }
  return 0.0;
}

std::int64_t ArrivalModel::draw(double mean, std::uint64_t slot, Rng& rng) const {
  switch (kind) {
    case ArrivalKind::Bernoulli:
      return rng.uniform01() < mean ? 1 : 0;
    case ArrivalKind::Poisson: {
      // Knuth's product of uniforms; means here are O(1).
      const double limit = std::exp(-mean);
      std::int64_t k = 0;
      double p = rng.uniform01();
      while (p > limit) {
        ++k;
        p *= rng.uniform01();
      }
      return k;
    }
    case ArrivalKind::Geometric: {
      // Failures before the first success, success probability 1/(1+mean).
      const double cont = mean / (1.0 + mean);
      std::int64_t k = 0;
      while (rng.uniform01() < cont) ++k;
      return k;
    }
    case ArrivalKind::Deterministic: {
      const auto now = static_cast<double>(slot);
      return static_cast<std::int64_t>(std::floor((now + 1.0) * mean) - std::floor(now * mean));
    }
  }
  return 0;
}

void ArrivalModel::validate(int n, double scale) const {
  if (!per_node.empty() && static_cast<int>(per_node.size()) != n)
    throw std::invalid_argument("per-node arrival rates must list one rate per node");
  for (int i = 1; i <= n; ++i) {
    const double mean = rate(i) * scale;
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("arrival rate must be non-negative");
    if (kind == ArrivalKind::Bernoulli && mean > 1.0)
      throw std::invalid_argument("Bernoulli arrivals need a rate of at most 1");
  }
}

// ---------------------------------------------------------------- variants

Variant parse_variant(std::string_view text) {
  if (text == "standard") return {VariantKind::Standard, 1};
  if (text == "reshuffle1") return {VariantKind::Reshuffle1, 1};
  if (text == "reshuffle2") return {VariantKind::Reshuffle2, 1};
  if (text == "reshuffle3") return {VariantKind::Reshuffle3, 1};
  if (text == "saturated") return {VariantKind::Saturated, 1};
  if (text.starts_with("multihop")) {
    auto rest = text.substr(8);
    if (rest.empty()) return Variant::multi_hop(1);
    if (rest.front() != ':') throw std::invalid_argument("expected multihop:<m>");
    const int m = std::stoi(std::string(rest.substr(1)));
    if (m < 1) throw std::invalid_argument("multi-hop m must be at least 1");
    return Variant::multi_hop(m);
  }
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

std::string to_string(const Variant& v) {
  switch (v.kind) {
    case VariantKind::Standard:
      return "standard";
    case VariantKind::Reshuffle1:
      return "reshuffle1";
    case VariantKind::Reshuffle2:
      return "reshuffle2";
    case VariantKind::Reshuffle3:
      return "reshuffle3";
    case VariantKind::Saturated:
      return "saturated";
    case VariantKind::MultiHop:
      return "multihop:" + std::to_string(v.hops);
  }
  return "?";
}

TraceLevel parse_trace_level(std::string_view text) {
  if (text == "none") return TraceLevel::None;
  if (text == "totals") return TraceLevel::Totals;
  if (text == "full") return TraceLevel::Full;
  throw std::invalid_argument("unknown trace level '" + std::string(text) + "'");
}

// ------------------------------------------------------------------ state

QueueState::QueueState(std::vector<std::int64_t> values) : q(std::move(values)) {
  for (auto v : q)
    if (v < 0) throw std::invalid_argument("queue lengths must be non-negative");
}

std::int64_t QueueState::total() const noexcept { return std::accumulate(q.begin(), q.end(), std::int64_t{0}); }

std::int64_t QueueState::max() const noexcept { return q.empty() ? 0 : *std::max_element(q.begin(), q.end()); }

OccupancyState QueueState::occupancy() const {
  std::vector<std::uint8_t> bits(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) bits[i] = q[i] > 0 ? 1 : 0;
  return OccupancyState(std::move(bits));
}

QueueState SimConfig::initial_state() const { return initial ? *initial : QueueState::zeros(topology.size()); }

void SimConfig::validate() const {
  const int n = topology.size();
  if (horizon < 1) throw std::invalid_argument("horizon must be at least one slot");
  if (initial && initial->size() != n) throw std::invalid_argument("initial state size does not match topology");
  if (variant.kind == VariantKind::MultiHop) {
    if (!topology.is_circle()) throw std::invalid_argument("multi-hop variant requires a circle");
    if (variant.hops < 1) throw std::invalid_argument("multi-hop m must be at least 1");
    arrivals.validate(n, 1.0 / variant.hops);
  } else {
    arrivals.validate(n);
  }
}

// ---------------------------------------------------------------- slots

namespace {

std::vector<int> identity_positions(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  return p;
}

// Shuffles the values at `positions` in place within `sources`.
void shuffle_positions(std::vector<int>& sources, const std::vector<int>& positions, Rng& rng) {
  std::vector<int> values;
  values.reserve(positions.size());
  for (int p : positions) values.push_back(sources[static_cast<std::size_t>(p - 1)]);
  for (std::size_t k = values.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(k));
    std::swap(values[k - 1], values[j]);
  }
  for (std::size_t k = 0; k < positions.size(); ++k) sources[static_cast<std::size_t>(positions[k] - 1)] = values[k];
}

double exogenous_scale(const SimConfig& cfg) {
  return cfg.variant.kind == VariantKind::MultiHop ? 1.0 / cfg.variant.hops : 1.0;
}

}  // namespace

std::vector<int> reshuffle_sources(const QueueState& state, const Variant& variant, const Topology& t, Rng& rng) {
  const int n = t.size();
  if (state.size() != n) throw std::invalid_argument("queue state size does not match topology");
  std::vector<int> sources = identity_positions(n);
  switch (variant.kind) {
    case VariantKind::Reshuffle1:
      shuffle_positions(sources, identity_positions(n), rng);
      break;
    case VariantKind::Reshuffle2: {
      std::vector<int> busy;
      for (int i = 1; i <= n; ++i)
        if (state[i] > 0) busy.push_back(i);
      shuffle_positions(sources, busy, rng);
      break;
    }
    case VariantKind::Reshuffle3:
      for (const auto& seg : segments(t, state.occupancy())) shuffle_positions(sources, segment_nodes(t, seg), rng);
      break;
    default:
      throw std::invalid_argument("variant " + to_string(variant) + " does not reshuffle");
  }
  return sources;
}

QueueState apply_reshuffle(const QueueState& state, const Variant& variant, const Topology& t, Rng& rng) {
  const auto sources = reshuffle_sources(state, variant, t, rng);
  QueueState out = state;
  for (std::size_t p = 0; p < sources.size(); ++p) out.q[p] = state.q[static_cast<std::size_t>(sources[p] - 1)];
  return out;
}

QueueState advance(const QueueState& state, const SimConfig& cfg, const SlotInputs& in, SlotTrace* trace) {
  const Topology& t = cfg.topology;
  const int n = t.size();
  const auto un = static_cast<std::size_t>(n);
  if (state.size() != n) throw std::invalid_argument("queue state size does not match topology");
  if (in.ranking.size() != n) throw std::invalid_argument("slot ranking size does not match topology");
  if (in.arrivals.size() != un) throw std::invalid_argument("slot arrivals size does not match topology");

  QueueState q = state;
  if (in.reshuffle) {
    const auto& src = *in.reshuffle;
    if (src.size() != un) throw std::invalid_argument("reshuffle size does not match topology");
    std::vector<std::uint8_t> seen(un, 0);
    for (std::size_t p = 0; p < un; ++p) {
      const int from = src[p];
      if (from < 1 || from > n || seen[static_cast<std::size_t>(from - 1)]++)
        throw std::invalid_argument("reshuffle is not a permutation");
      q.q[p] = state.q[static_cast<std::size_t>(from - 1)];
    }
  }

  const bool saturated = cfg.variant.kind == VariantKind::Saturated;
  const OccupancyState s = saturated ? OccupancyState::all(n, true) : q.occupancy();
  const auto order = in.ranking.order();
  access::TransmissionVector d(un);
  access::resolve_in_order(t, s.bits(), order, d);

  const bool multi_hop = cfg.variant.kind == VariantKind::MultiHop;
  if (multi_hop && in.forward.size() != un) throw std::invalid_argument("multi-hop slot needs one forwarding coin per node");

  std::vector<std::int64_t> departures(un, 0);
  std::vector<std::int64_t> forwarded(un, 0);
  for (std::size_t i = 0; i < un; ++i) {
    if (d[i] && q.q[i] > 0) {
      departures[i] = 1;
      q.q[i] -= 1;
      if (multi_hop && in.forward[i]) forwarded[static_cast<std::size_t>(t.wrap(static_cast<long long>(i) + 2) - 1)] += 1;
    }
  }
  for (std::size_t i = 0; i < un; ++i) {
    if (in.arrivals[i] < 0) throw std::invalid_argument("arrival counts must be non-negative");
    q.q[i] += in.arrivals[i] + forwarded[i];
    if (q.q[i] > kQueueLimit) throw std::overflow_error("queue length exceeds the supported range");
  }

  if (trace) {
    trace->occupancy = s;
    trace->ranking = in.ranking;
    trace->transmissions = std::move(d);
    trace->departures = std::move(departures);
    trace->arrivals = in.arrivals;
    trace->forwarded = std::move(forwarded);
    trace->total_queue = q.total();
    trace->max_queue = q.max();
  }
  return q;
}

namespace {

SlotInputs draw_inputs(const QueueState& state, const SimConfig& cfg, Rng& rng, std::uint64_t slot) {
  const int n = cfg.topology.size();
  SlotInputs in;
  if (cfg.variant.is_reshuffle()) in.reshuffle = reshuffle_sources(state, cfg.variant, cfg.topology, rng);
  in.ranking = access::sample_ranking(n, rng);
  if (cfg.variant.kind == VariantKind::MultiHop) {
    in.forward.assign(static_cast<std::size_t>(n), 0);
    if (cfg.variant.hops > 1) {
      const double stay = 1.0 - 1.0 / cfg.variant.hops;
      for (auto& f : in.forward) f = rng.uniform01() < stay ? 1 : 0;
    }
  }
  const double scale = exogenous_scale(cfg);
  in.arrivals.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    in.arrivals[static_cast<std::size_t>(i - 1)] = cfg.arrivals.draw(cfg.arrivals.rate(i) * scale, slot, rng);
  return in;
}

}  // namespace

QueueState step(const QueueState& state, const SimConfig& cfg, Rng& rng, std::uint64_t slot, SlotTrace* trace) {
  SlotInputs in = draw_inputs(state, cfg, rng, slot);
  if (trace) trace->slot = slot;
  return advance(state, cfg, in, trace);
}

QueueState multi_hop_step(const QueueState& state, int m, const SimConfig& cfg, Rng& rng, std::uint64_t slot,
                          SlotTrace* trace) {
  if (!cfg.topology.is_circle()) throw std::invalid_argument("multi-hop variant requires a circle");
  if (cfg.variant.kind != VariantKind::MultiHop || cfg.variant.hops != m) {
    SimConfig local = cfg;
    local.variant = Variant::multi_hop(m);
    local.validate();
    return step(state, local, rng, slot, trace);
  }
  return step(state, cfg, rng, slot, trace);
}

// ---------------------------------------------------------------- Lyapunov

BigInt lyapunov_value(const QueueState& state, const Topology& t) {
  const int n = t.size();
  if (state.size() != n) throw std::invalid_argument("queue state size does not match topology");
  BigInt sum = 0;
  const int pairs = t.is_circle() ? n : n - 1;
  for (int i = 1; i <= pairs; ++i) {
    BigInt a = state[i];
    a += state[t.wrap(i + 1)];
    sum += a * a;
  }
  // A one-node circle pairs the node with itself; a two-node circle
  // counts the single pair twice, once from each side.
  return sum;
}

namespace {

i128 lyapunov_delta(const QueueState& before, const QueueState& after, const Topology& t) {
  const int n = t.size();
  const int pairs = t.is_circle() ? n : n - 1;
  i128 delta = 0;
  for (int i = 1; i <= pairs; ++i) {
    const int j = t.wrap(i + 1);
    const i128 a0 = static_cast<i128>(before[i]) + before[j];
    const i128 a1 = static_cast<i128>(after[i]) + after[j];
    delta += (a1 - a0) * (a1 + a0);
  }
  return delta;
}

}  // namespace

DriftEstimate measure_drift(const SimConfig& cfg, const QueueState& state, std::uint64_t replications, const Rng& rng) {
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  cfg.validate();
  if (state.size() != cfg.topology.size()) throw std::invalid_argument("queue state size does not match topology");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t r = 0; r < replications; ++r) {
    Rng local = rng.substream(r);
    const QueueState next = step(state, cfg, local, 0);
    const auto delta = static_cast<double>(lyapunov_delta(state, next, cfg.topology));
    sum += delta;
    sum_sq += delta * delta;
  }
  const auto reps = static_cast<double>(replications);
  DriftEstimate est;
  est.replications = replications;
  est.mean = sum / reps;
  if (replications > 1) {
    const double var = std::max(0.0, (sum_sq - reps * est.mean * est.mean) / (reps - 1.0));
    est.std_error = std::sqrt(var / reps);
  }
  return est;
}

double lyapunov_drift_bound(const SimConfig& cfg, const QueueState& state) {
  if (!cfg.arrivals.homogeneous() || cfg.variant.kind != VariantKind::Standard)
    throw std::invalid_argument("drift bound covers the homogeneous standard system only");
  const int n = cfg.topology.size();
  const double lambda = cfg.arrivals.lambda;
  double weighted = 0.0;
  for (int i = 1; i <= n; ++i) {
    const bool end = !cfg.topology.is_circle() && (i == 1 || i == n);
    const double w = end ? 2.0 * lambda - 1.0 : 4.0 * lambda - 1.5;
    weighted += w * static_cast<double>(state[i]);
  }
  const double c = 2.0 * n * cfg.arrivals.second_moment(lambda) + 2.0 * n * lambda * lambda + 4.0 * n;
  return 2.0 * weighted + c;
}

// ----------------------------------------------------------------- verdict

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::StableEvidence:
      return "StableEvidence";
    case Classification::UnstableEvidence:
      return "UnstableEvidence";
    case Classification::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

Rational reference_capacity(const Topology& t, const Variant& v) {
  const int n = t.size();
  if (t.is_circle()) return parking::circle_departures(n) / n;
  if (n == 1) return 1;
  const Rational half(1, 2);
  if (v.is_reshuffle()) {
    const Rational ratio = parking::line_departures(n) / n;
    return ratio < half ? ratio : half;
  }
  return half;
}

double stability_gap(const SimConfig& cfg) {
  const Topology& t = cfg.topology;
  const int n = t.size();
  if (cfg.arrivals.homogeneous()) return to_double(reference_capacity(t, cfg.variant)) - cfg.arrivals.lambda;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const double mid = cfg.arrivals.rate(i);
    if (!t.is_circle() && n >= 2 && (i == 1 || i == n)) {
      const double other = cfg.arrivals.rate(i == 1 ? 2 : n - 1);
      gap = std::min(gap, (1.0 - (mid + other)) / 2.0);
      continue;
    }
    double load = 2.0 * mid;
    for (int nb : t.neighbors(i)) load += cfg.arrivals.rate(nb);
    gap = std::min(gap, (1.5 - load) / 4.0);
  }
  return gap;
}

StabilityVerdict classify(const std::vector<WindowStat>& windows, std::int64_t initial_total, std::int64_t final_total,
                          double gap, int n) {
  StabilityVerdict v;
  v.initial_total = initial_total;
  v.final_total = final_total;
  v.stability_gap = gap;
  for (const auto& w : windows) v.max_window_mean = std::max(v.max_window_mean, w.mean_total);
  v.queue_bound = gap > 0.0 ? kStableQueueMultiple * n / gap : 0.0;

  const std::size_t first = windows.size() / 2;
  const std::size_t count = windows.size() - first;
  if (count < 3) {
    v.reason = "too few windows for a slope test";
    return v;
  }
  // Ordinary least squares of window mean on window index.
  double mx = 0.0, my = 0.0;
  for (std::size_t k = first; k < windows.size(); ++k) {
    mx += static_cast<double>(k);
    my += windows[k].mean_total;
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = first; k < windows.size(); ++k) {
    const double dx = static_cast<double>(k) - mx;
    sxx += dx * dx;
    sxy += dx * (windows[k].mean_total - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t k = first; k < windows.size(); ++k) {
    const double r = windows[k].mean_total - (my + slope * (static_cast<double>(k) - mx));
    sse += r * r;
  }
  const double slope_se = std::sqrt(sse / static_cast<double>(count - 2) / sxx);
  const auto window_len = static_cast<double>(windows[first].slots);
  v.growth_rate = slope / window_len;
  v.growth_std_error = slope_se / window_len;

  const bool rising = slope > kVerdictSigmas * slope_se && slope > 0.0;
  const double start = static_cast<double>(std::max<std::int64_t>(initial_total, 1));
  if (rising && static_cast<double>(final_total) > kUnstableGrowthFactor * start) {
    v.classification = Classification::UnstableEvidence;
    v.reason = "total queue grows significantly over the second half";
    return v;
  }
  if (!rising && gap > 0.0 && v.max_window_mean <= v.queue_bound) {
    v.classification = Classification::StableEvidence;
    v.reason = "no significant growth and window means within the load-scaled bound";
    return v;
  }
  if (rising) {
    v.reason = "significant growth but final total below the growth factor";
  } else if (gap <= 0.0) {
    v.reason = "load at or above the reference capacity";
  } else {
    v.reason = "window means exceed the load-scaled bound";
  }
  return v;
}

// --------------------------------------------------------------------- run

RunResult run(const SimConfig& cfg, const TraceObserver& observer) {
  cfg.validate();
  const int n = cfg.topology.size();
  const auto un = static_cast<std::size_t>(n);
  const std::uint64_t window_count = std::min<std::uint64_t>(kVerdictWindows, cfg.horizon);
  const std::uint64_t window_len = cfg.horizon / window_count;

  RunResult res;
  QueueState q = cfg.initial_state();
  const std::int64_t initial_total = q.total();
  res.max_queue = q.max();
  std::vector<std::int64_t> transmissions(un, 0);
  res.per_node_departures.assign(un, 0);

  Rng rng(cfg.seed);
  SlotTrace trace;
  const bool tracing = static_cast<bool>(observer) && cfg.trace != TraceLevel::None;

  WindowStat current;
  double window_sum = 0.0;
  for (std::uint64_t slot = 0; slot < cfg.horizon; ++slot) {
    trace.slot = slot;
    q = step(q, cfg, rng, slot, &trace);
    for (std::size_t i = 0; i < un; ++i) {
      transmissions[i] += trace.transmissions[i];
      res.per_node_departures[i] += trace.departures[i];
      res.departures_total += trace.departures[i];
      res.arrivals_total += trace.arrivals[i];
      res.forwarded_total += trace.forwarded[i];
    }
    res.max_queue = std::max(res.max_queue, trace.max_queue);
    if (tracing) {
      trace.lyapunov = lyapunov_value(q, cfg.topology);
      if (cfg.trace == TraceLevel::Full) trace.queues = q.q;
      observer(trace);
    }

    // Windows: the last one absorbs the remainder of the horizon.
    const std::uint64_t w = std::min<std::uint64_t>(slot / window_len, window_count - 1);
    if (current.slots == 0) current.first_slot = slot;
    window_sum += static_cast<double>(trace.total_queue);
    current.max_total = std::max(current.max_total, trace.total_queue);
    ++current.slots;
    const bool last_slot = slot + 1 == cfg.horizon;
    const bool window_done = w + 1 < window_count ? (slot + 1) % window_len == 0 : last_slot;
    if (window_done) {
      current.mean_total = window_sum / static_cast<double>(current.slots);
      res.windows.push_back(current);
      current = WindowStat{};
      window_sum = 0.0;
    }
  }

  res.final_state = q;
  res.per_node_throughput.resize(un);
  for (std::size_t i = 0; i < un; ++i)
    res.per_node_throughput[i] = static_cast<double>(transmissions[i]) / static_cast<double>(cfg.horizon);
  res.verdict = classify(res.windows, initial_total, q.total(), stability_gap(cfg), n);
  return res;
}

// --------------------------------------------------------------- saturated

std::vector<access::ProbabilityEstimate> saturated_throughput(const Topology& t, std::uint64_t slots, const Rng& rng) {
  if (slots < 1) throw std::invalid_argument("need at least one slot");
  constexpr std::uint64_t kBlock = 1 << 16;
  const auto un = static_cast<std::size_t>(t.size());
  const std::uint64_t blocks = (slots + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint64_t>> counts(blocks, std::vector<std::uint64_t>(un, 0));
  const std::vector<std::uint8_t> all(un, 1);

  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    std::vector<int> order(un);
    std::vector<std::uint8_t> d(un);
    for (std::uint64_t b = first; b < blocks; b += stride) {
      Rng local = rng.substream(b);
      const std::uint64_t count = std::min(kBlock, slots - b * kBlock);
      auto& c = counts[b];
      for (std::uint64_t k = 0; k < count; ++k) {
        access::sample_order(order, local);
        access::resolve_in_order(t, all, order, d);
        for (std::size_t i = 0; i < un; ++i) c[i] += d[i];
      }
    }
  };
  const std::uint64_t workers = std::min<std::uint64_t>(blocks, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  std::vector<access::ProbabilityEstimate> out(un);
  for (std::size_t i = 0; i < un; ++i) {
    std::uint64_t total = 0;
    for (const auto& c : counts) total += c[i];
    auto& e = out[i];
    e.samples = slots;
    e.mean = static_cast<double>(total) / static_cast<double>(slots);
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(slots));
  }
  return out;
}

}  // namespace csma::sim
