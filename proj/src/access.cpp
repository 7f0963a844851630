#include "csma/access.hpp"

#include <cmath>
#include <limits>
#include <thread>

namespace csma::access {

// ---------------------------------------------------------------- Ranking

Ranking::Ranking(std::vector<std::uint32_t> ranks) : ranks_(std::move(ranks)) {
  std::vector<std::uint8_t> seen(ranks_.size() + 1, 0);
  for (auto r : ranks_) {
    if (r < 1 || r > ranks_.size() || seen[r]) throw std::invalid_argument("ranking is not a permutation of 1..n");
    seen[r] = 1;
  }
}

Ranking Ranking::identity(int n) {
  std::vector<std::uint32_t> r(static_cast<std::size_t>(n));
  std::iota(r.begin(), r.end(), 1U);
  return Ranking(std::move(r));
}

Ranking Ranking::from_order(std::span<const int> order) {
  std::vector<std::uint32_t> r(order.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int node = order[k];
    if (node < 1 || static_cast<std::size_t>(node) > order.size())
      throw std::invalid_argument("order entry outside 1..n");
    r[static_cast<std::size_t>(node - 1)] = static_cast<std::uint32_t>(k + 1);
  }
  return Ranking(std::move(r));
}

std::vector<int> Ranking::order() const {
  std::vector<int> o(ranks_.size());
  for (std::size_t i = 0; i < ranks_.size(); ++i) o[ranks_[i] - 1] = static_cast<int>(i + 1);
  return o;
}

std::string Ranking::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < ranks_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ranks_[i]);
  }
  return out + ")";
}

// ------------------------------------------------------------- resolution

void resolve_in_order(const Topology& t, std::span<const std::uint8_t> s, std::span<const int> order,
                      std::span<std::uint8_t> d) {
  std::fill(d.begin(), d.end(), std::uint8_t{0});
  const auto& masks = t.neighbor_masks();
  if (!masks.empty()) {
    std::uint64_t blocked = 0;
    for (int v : order) {
      const auto idx = static_cast<std::size_t>(v - 1);
      const std::uint64_t bit = std::uint64_t{1} << idx;
      if (s[idx] && !(blocked & bit)) {
        d[idx] = 1;
        blocked |= bit | masks[idx];
      }
    }
    return;
  }
  for (int v : order) {
    const auto idx = static_cast<std::size_t>(v - 1);
    if (!s[idx]) continue;
    bool free = true;
    for (int nb : t.neighbors(v)) {
      if (d[static_cast<std::size_t>(nb - 1)]) {
        free = false;
        break;
      }
    }
    if (free) d[idx] = 1;
  }
}

TransmissionVector resolve(const Topology& t, const OccupancyState& s, const Ranking& u) {
  if (s.size() != t.size() || u.size() != t.size())
    throw std::invalid_argument("resolve: dimensions of topology, state and ranking differ");
  const auto order = u.order();
  TransmissionVector d(static_cast<std::size_t>(t.size()));
  resolve_in_order(t, s.bits(), order, d);
  return d;
}

void sample_order(std::span<int> order, Rng& rng) {
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t k = order.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(k));
    std::swap(order[k - 1], order[j]);
  }
}

Ranking sample_ranking(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("ranking needs n >= 1");
  std::vector<std::uint32_t> r(static_cast<std::size_t>(n));
  std::iota(r.begin(), r.end(), 1U);
  for (std::size_t k = r.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(k));
    std::swap(r[k - 1], r[j]);
  }
  return Ranking(std::move(r));
}

// ------------------------------------------------------------ construction

AccessConstruction::AccessConstruction(const Topology& t, const OccupancyState& s)
    : topo_(&t),
      n_(t.size()),
      occupied_(s.bits()),
      active_(s.bits()),
      picked_(static_cast<std::size_t>(t.size()), 0),
      ranks_(static_cast<std::size_t>(t.size()), 0),
      d_(static_cast<std::size_t>(t.size()), 0) {
  if (s.size() != n_) throw std::invalid_argument("occupancy size does not match topology");
}

AccessConstruction::AccessConstruction(const Topology& t, const OccupancyState& s, int first, int second)
    : AccessConstruction(t, s) {
  if (first == second) throw std::invalid_argument("conditional ranking needs two distinct nodes");
  if (first < 1 || first > n_ || second < 1 || second > n_)
    throw std::out_of_range("conditional ranking node outside 1..n");
  pair_first_ = first;
  pair_second_ = second;
}

void AccessConstruction::choices(std::vector<std::pair<int, int>>& out) const {
  out.clear();
  const bool pair_open = pair_first_ != 0 && !picked_[static_cast<std::size_t>(pair_first_ - 1)] &&
                         !picked_[static_cast<std::size_t>(pair_second_ - 1)];
  for (int v = 1; v <= n_; ++v) {
    if (picked_[static_cast<std::size_t>(v - 1)]) continue;
    if (pair_open && v == pair_second_) continue;
    out.emplace_back(v, pair_open && v == pair_first_ ? 2 : 1);
  }
}

void AccessConstruction::choose(int node) {
  const auto idx = static_cast<std::size_t>(node - 1);
  if (node < 1 || node > n_ || picked_[idx]) throw std::invalid_argument("node already chosen or out of range");
  if (pair_first_ != 0 && node == pair_second_ && !picked_[static_cast<std::size_t>(pair_first_ - 1)])
    throw std::invalid_argument("conditioned node cannot be chosen before its partner");
  picked_[idx] = 1;
  ranks_[idx] = static_cast<std::uint32_t>(++chosen_);
  if (active_[idx] && occupied_[idx]) {
    d_[idx] = 1;
    active_[idx] = 0;
    for (int nb : topo_->neighbors(node)) active_[static_cast<std::size_t>(nb - 1)] = 0;
  }
}

AccessOutcome AccessConstruction::outcome() const {
  if (!finished()) throw std::logic_error("construction not finished");
  return {Ranking(ranks_), d_};
}

namespace {

AccessOutcome run_construction(AccessConstruction c, Rng& rng) {
  std::vector<std::pair<int, int>> options;
  while (!c.finished()) {
    c.choices(options);
    auto r = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(c.total_weight())));
    for (const auto& [node, weight] : options) {
      if (r < weight) {
        c.choose(node);
        break;
      }
      r -= weight;
    }
  }
  return c.outcome();
}

void walk_law(const AccessConstruction& c, const Rational& weight, OutcomeLaw& law) {
  if (c.finished()) {
    auto o = c.outcome();
    law[{o.ranking.ranks(), o.transmissions}] += weight;
    return;
  }
  std::vector<std::pair<int, int>> options;
  c.choices(options);
  const int total = c.total_weight();
  for (const auto& [node, w] : options) {
    AccessConstruction next = c;
    next.choose(node);
    walk_law(next, weight * Rational(w, total), law);
  }
}

}  // namespace

AccessOutcome sequential_process(const Topology& t, const OccupancyState& s, Rng& rng) {
  return run_construction(AccessConstruction(t, s), rng);
}

AccessOutcome conditional_ranking(const Topology& t, const OccupancyState& s, int i, int j, Rng& rng) {
  return run_construction(AccessConstruction(t, s, i, j), rng);
}

OutcomeLaw construction_law(const Topology& t, const OccupancyState& s) {
  OutcomeLaw law;
  walk_law(AccessConstruction(t, s), Rational(1), law);
  return law;
}

OutcomeLaw conditional_construction_law(const Topology& t, const OccupancyState& s, int i, int j) {
  OutcomeLaw law;
  walk_law(AccessConstruction(t, s, i, j), Rational(1), law);
  return law;
}

OutcomeLaw uniform_resolve_law(const Topology& t, const OccupancyState& s, int i, int j) {
  const bool restricted = i != 0 || j != 0;
  if (restricted && (i == j || i < 1 || j < 1 || i > t.size() || j > t.size()))
    throw std::invalid_argument("restriction needs two distinct nodes in range");
  OutcomeLaw law;
  std::uint64_t total = 0;
  for_each_outcome(t, s, [&](const SlotOutcome& o) {
    if (restricted && !(o.u[static_cast<std::size_t>(i - 1)] < o.u[static_cast<std::size_t>(j - 1)])) return;
    ++total;
    law[{std::vector<std::uint32_t>(o.u.begin(), o.u.end()), TransmissionVector(o.d.begin(), o.d.end())}] += 1;
  });
  for (auto& [key, p] : law) p /= total;
  return law;
}

// ------------------------------------------------------------ enumeration

void check_enumerable(const Topology& t, int cap) {
  if (t.size() > cap) {
    throw std::invalid_argument("enumeration over " + std::to_string(t.size()) + "! rankings exceeds cap " +
                                std::to_string(cap));
  }
}

namespace {

void check_event_fits(const Topology& t, const EventPredicate& event) {
  if (event.max_node() > t.size())
    throw std::invalid_argument("event '" + event.to_string() + "' references node beyond " + t.describe());
}

}  // namespace

std::uint64_t count_rankings(const Topology& t, const OccupancyState& s, const EventPredicate& event, int cap) {
  check_enumerable(t, cap);
  check_event_fits(t, event);
  std::uint64_t hits = 0;
  for_each_outcome(t, s, [&](const SlotOutcome& o) { hits += event(o) ? 1 : 0; });
  return hits;
}

Rational exact_event_probability(const Topology& t, const OccupancyState& s, const EventPredicate& event, int cap) {
  const std::uint64_t hits = count_rankings(t, s, event, cap);
  return Rational(BigInt(hits), factorial(static_cast<unsigned>(t.size())));
}

Rational segment_event_probability(int k, const EventPredicate& event, int cap) {
  if (k < 1) throw std::invalid_argument("segment length must be positive");
  return exact_event_probability(Topology::line(k), OccupancyState::all(k, true), event, cap);
}

std::vector<Rational> transmission_probabilities(const Topology& t, const OccupancyState& s, int cap) {
  check_enumerable(t, cap);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(t.size()), 0);
  for_each_outcome(t, s, [&](const SlotOutcome& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.d[i];
  });
  const BigInt total = factorial(static_cast<unsigned>(t.size()));
  std::vector<Rational> p;
  p.reserve(counts.size());
  for (auto c : counts) p.emplace_back(BigInt(c), total);
  return p;
}

Rational expected_departures(const Topology& t, const OccupancyState& s, int cap) {
  Rational sum = 0;
  for (const auto& p : transmission_probabilities(t, s, cap)) sum += p;
  return sum;
}

std::vector<std::uint64_t> segment_transmission_histogram(int k, int cap) {
  if (k < 1 || k > 20) throw std::invalid_argument("segment histogram needs 1 <= k <= 20");
  const Topology t = Topology::line(k);
  check_enumerable(t, cap);
  std::vector<std::uint64_t> hist(std::size_t{1} << k, 0);
  for_each_outcome(t, OccupancyState::all(k, true), [&](const SlotOutcome& o) {
    std::size_t m = 0;
    for (int i = 0; i < k; ++i) m |= static_cast<std::size_t>(o.d[static_cast<std::size_t>(i)]) << i;
    ++hist[m];
  });
  return hist;
}

// ------------------------------------------------------------ Monte Carlo

double ProbabilityEstimate::z_score(double exact) const {
  const double diff = std::abs(mean - exact);
  if (std_error == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / std_error;
}

namespace {

constexpr std::uint64_t kBlockSamples = 1 << 16;

std::uint64_t run_block(const Topology& t, const OccupancyState& s, const EventPredicate& event,
                        std::uint64_t samples, Rng rng) {
  const auto n = static_cast<std::size_t>(t.size());
  std::vector<int> order(n);
  std::vector<std::uint32_t> u(n);
  std::vector<std::uint8_t> d(n);
  const auto& bits = s.bits();
  const bool need_ranks = event.uses_ranks();
  const SlotOutcome view{bits, u, d};
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    sample_order(order, rng);
    if (need_ranks)
      for (std::size_t r = 0; r < n; ++r) u[static_cast<std::size_t>(order[r] - 1)] = static_cast<std::uint32_t>(r + 1);
    resolve_in_order(t, bits, order, d);
    hits += event(view) ? 1 : 0;
  }
  return hits;
}

}  // namespace

ProbabilityEstimate monte_carlo_probability(const Topology& t, const OccupancyState& s,
                                            const EventPredicate& event, std::uint64_t samples, const Rng& rng) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (s.size() != t.size()) throw std::invalid_argument("occupancy size does not match topology");
  check_event_fits(t, event);
  const std::uint64_t blocks = (samples + kBlockSamples - 1) / kBlockSamples;
  std::vector<std::uint64_t> hits(blocks, 0);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t b = first; b < blocks; b += stride) {
      const std::uint64_t count = std::min(kBlockSamples, samples - b * kBlockSamples);
      hits[b] = run_block(t, s, event, count, rng.substream(b));
    }
  };
  const std::uint64_t workers =
      std::min<std::uint64_t>(blocks, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  ProbabilityEstimate est;
  est.samples = samples;
  est.mean = static_cast<double>(total) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
  return est;
}

// ------------------------------------------------------------ worst case

OccupancyMask OccupancyMask::parse(std::string_view text) {
  std::vector<std::int8_t> cells;
  for (char c : text) {
    if (c == '0' || c == '1') {
      cells.push_back(static_cast<std::int8_t>(c - '0'));
    } else if (c == '*' || c == '?') {
      cells.push_back(kFree);
    } else if (c != ',' && c != ' ') {
      throw std::invalid_argument("bad mask character '" + std::string(1, c) + "'");
    }
  }
  if (cells.empty()) throw std::invalid_argument("empty occupancy mask");
  OccupancyMask m(static_cast<int>(cells.size()));
  m.cells_ = std::move(cells);
  return m;
}

OccupancyMask& OccupancyMask::fix(int i, bool occupied) {
  cells_.at(static_cast<std::size_t>(i - 1)) = occupied ? 1 : 0;
  return *this;
}

int OccupancyMask::free_count() const noexcept {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), kFree));
}

std::vector<int> OccupancyMask::free_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] == kFree) out.push_back(static_cast<int>(i + 1));
  return out;
}

OccupancyState OccupancyMask::complete(std::uint64_t bits) const {
  std::vector<std::uint8_t> s(cells_.size());
  int k = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] == kFree) {
      s[i] = static_cast<std::uint8_t>((bits >> k) & 1U);
      ++k;
    } else {
      s[i] = static_cast<std::uint8_t>(cells_[i]);
    }
  }
  return OccupancyState(std::move(s));
}

std::string OccupancyMask::to_string() const {
  std::string out;
  for (auto c : cells_) out.push_back(c == kFree ? '*' : static_cast<char>('0' + c));
  return out;
}

WorstCase worst_case_probability(const Topology& t, const OccupancyMask& mask, const EventPredicate& event,
                                 const EventPredicate& filter, int cap) {
  if (mask.size() != t.size()) throw std::invalid_argument("mask size does not match topology");
  check_enumerable(t, cap);
  check_event_fits(t, event);
  check_event_fits(t, filter);
  if (!filter.occupancy_only()) throw std::invalid_argument("state filter may only test occupancy");
  const int free = mask.free_count();
  if (free > kMaxFreeMaskBits)
    throw std::invalid_argument("mask leaves " + std::to_string(free) + " free nodes; limit is " +
                                std::to_string(kMaxFreeMaskBits));

  const std::vector<std::uint32_t> no_ranks(static_cast<std::size_t>(t.size()), 0);
  const std::vector<std::uint8_t> no_tx(static_cast<std::size_t>(t.size()), 0);
  WorstCase best;
  bool found = false;
  std::uint64_t best_hits = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free); ++bits) {
    OccupancyState s = mask.complete(bits);
    if (!filter(SlotOutcome{s.bits(), no_ranks, no_tx})) continue;
    ++best.completions_checked;
    const std::uint64_t hits = count_rankings(t, s, event, cap);
    if (!found || hits < best_hits) {
      found = true;
      best_hits = hits;
      best.state = std::move(s);
    }
  }
  if (!found) throw std::invalid_argument("no completion of the mask satisfies the filter");
  best.probability = Rational(BigInt(best_hits), factorial(static_cast<unsigned>(t.size())));
  return best;
}

}  // namespace csma::access
