#include "csma/queue_sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

using namespace csma;
using namespace csma::sim;

namespace {

SimConfig config(Topology t, double lambda, Variant v = {}, std::uint64_t horizon = 10'000, std::uint64_t seed = 1) {
  SimConfig c;
  c.topology = t;
  c.arrivals.lambda = lambda;
  c.variant = v;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

std::vector<std::int64_t> sorted(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Step, HandTracedSlot) {
  const auto cfg = config(Topology::line(3), 0.5);
  SlotInputs in;
  in.ranking = access::Ranking{1, 3, 2};
  in.arrivals = {0, 1, 0};
  SlotTrace tr;
  const auto next = advance(QueueState{2, 0, 1}, cfg, in, &tr);
  EXPECT_EQ(tr.transmissions, (access::TransmissionVector{1, 0, 1}));
  EXPECT_EQ(next, (QueueState{1, 1, 0}));
  EXPECT_EQ(tr.total_queue, 2);
}

TEST(Step, EmptyQueuesOnlyReceive) {
  const auto cfg = config(Topology::circle(4), 0.5);
  SlotInputs in;
  in.ranking = access::Ranking{4, 3, 2, 1};
  in.arrivals = {1, 0, 2, 0};
  SlotTrace tr;
  const auto next = advance(QueueState::zeros(4), cfg, in, &tr);
  EXPECT_EQ(tr.transmissions, access::TransmissionVector(4, 0));
  EXPECT_EQ(next, (QueueState{1, 0, 2, 0}));
}

TEST(Step, SaturatedCompetesWhenEmpty) {
  const auto cfg = config(Topology::line(3), 0.0, Variant{VariantKind::Saturated, 1});
  SlotInputs in;
  in.ranking = access::Ranking{1, 2, 3};
  in.arrivals = {0, 0, 0};
  SlotTrace tr;
  const auto next = advance(QueueState{0, 4, 2}, cfg, in, &tr);
  // Node 1 wins the channel with an empty queue and blocks node 2.
  EXPECT_EQ(tr.occupancy, OccupancyState::all(3, true));
  EXPECT_EQ(tr.transmissions, (access::TransmissionVector{1, 0, 1}));
  EXPECT_EQ(tr.departures, (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_EQ(next, (QueueState{0, 4, 1}));
}

TEST(Step, MultiHopForwarding) {
  const auto cfg = config(Topology::circle(4), 0.4, Variant::multi_hop(2));
  SlotInputs in;
  in.ranking = access::Ranking{1, 2, 3, 4};
  in.arrivals = {0, 0, 0, 0};
  in.forward = {1, 0, 0, 0};
  SlotTrace tr;
  const auto next = advance(QueueState{1, 0, 0, 0}, cfg, in, &tr);
  EXPECT_EQ(tr.transmissions, (access::TransmissionVector{1, 0, 0, 0}));
  EXPECT_EQ(next, (QueueState{0, 1, 0, 0}));
  // Node 4 forwards around the circle to node 1.
  in.forward = {0, 0, 0, 1};
  const auto wrap = advance(QueueState{0, 0, 0, 3}, cfg, in);
  EXPECT_EQ(wrap, (QueueState{1, 0, 0, 2}));
}

TEST(Step, MultiHopWithOneHopEqualsStandard) {
  const auto standard = config(Topology::circle(4), 0.45, {}, 20'000, 5);
  auto hop = standard;
  hop.variant = Variant::multi_hop(1);
  const auto a = run(standard);
  const auto b = run(hop);
  EXPECT_EQ(a.final_state, b.final_state);
  EXPECT_EQ(a.per_node_departures, b.per_node_departures);
  EXPECT_EQ(b.forwarded_total, 0);
}

TEST(Step, MultiHopRequiresCircle) {
  auto cfg = config(Topology::line(4), 0.3, Variant::multi_hop(2));
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  Rng rng(1);
  EXPECT_THROW(multi_hop_step(QueueState::zeros(4), 2, cfg, rng), std::invalid_argument);
}

TEST(Reshuffle, VersionOneIsUniformOverPlacements) {
  const auto t = Topology::line(3);
  const QueueState q{3, 0, 7};
  Rng rng(4);
  std::map<std::vector<std::int64_t>, int> counts;
  const int samples = 60000;
  for (int k = 0; k < samples; ++k) {
    const auto r = apply_reshuffle(q, Variant{VariantKind::Reshuffle1, 1}, t, rng);
    ASSERT_EQ(sorted(r.q), sorted(q.q));
    ++counts[r.q];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double sd = std::sqrt(samples * (1.0 / 6) * (5.0 / 6));
  for (const auto& [placement, c] : counts) EXPECT_NEAR(c, samples / 6.0, 4 * sd);
}

TEST(Reshuffle, VersionTwoKeepsZeros) {
  const auto t = Topology::line(3);
  const QueueState q{3, 0, 7};
  Rng rng(6);
  int swapped = 0;
  const int samples = 20000;
  for (int k = 0; k < samples; ++k) {
    const auto r = apply_reshuffle(q, Variant{VariantKind::Reshuffle2, 1}, t, rng);
    ASSERT_EQ(r[2], 0);
    ASSERT_EQ(sorted(r.q), sorted(q.q));
    swapped += r[1] == 7;
  }
  EXPECT_NEAR(swapped, samples / 2.0, 4 * std::sqrt(samples / 4.0));
}

TEST(Reshuffle, VersionThreeStaysInsideSegments) {
  const auto t = Topology::line(4);
  const QueueState q{3, 5, 0, 7};
  Rng rng(8);
  int swapped = 0;
  const int samples = 20000;
  for (int k = 0; k < samples; ++k) {
    const auto r = apply_reshuffle(q, Variant{VariantKind::Reshuffle3, 1}, t, rng);
    ASSERT_EQ(r[3], 0);
    ASSERT_EQ(r[4], 7);
    ASSERT_EQ(r[1] + r[2], 8);
    swapped += r[1] == 5;
  }
  EXPECT_NEAR(swapped, samples / 2.0, 4 * std::sqrt(samples / 4.0));
  // A wrapping segment on a circle mixes across the seam.
  const auto c = Topology::circle(5);
  bool crossed = false;
  for (int k = 0; k < 200 && !crossed; ++k) {
    const auto r = apply_reshuffle(QueueState{1, 0, 0, 0, 9}, Variant{VariantKind::Reshuffle3, 1}, c, rng);
    ASSERT_EQ(r[2] + r[3] + r[4], 0);
    crossed = r[1] == 9;
  }
  EXPECT_TRUE(crossed);
}

TEST(Reshuffle, RejectsNonReshuffleVariant) {
  Rng rng(1);
  EXPECT_THROW(apply_reshuffle(QueueState{1, 2}, Variant{}, Topology::line(2), rng), std::invalid_argument);
}

TEST(Lyapunov, Values) {
  EXPECT_EQ(lyapunov_value(QueueState{1, 0, 0, 0}, Topology::circle(4)), 2);
  EXPECT_EQ(lyapunov_value(QueueState{1, 0, 0, 0}, Topology::line(4)), 1);
  EXPECT_EQ(lyapunov_value(QueueState::zeros(5), Topology::circle(5)), 0);
  EXPECT_EQ(lyapunov_value(QueueState{1, 2, 3}, Topology::circle(3)), 9 + 25 + 16);
  // Pairs (1,2), (2,3), (3,1): (2b)^2 + b^2 + b^2, beyond 64-bit range.
  const std::int64_t big = 3'000'000'000'000LL;
  EXPECT_EQ(lyapunov_value(QueueState{big, big, 0}, Topology::circle(3)), BigInt(big) * big * 6);
}

TEST(Drift, EmptyStateEqualsArrivalEnergy) {
  // From zero queues L(Q(1)) = L(xi); for Bernoulli each pair gives 2 lambda + 2 lambda^2.
  const double lambda = 0.3;
  const auto cfg = config(Topology::circle(5), lambda);
  const auto est = measure_drift(cfg, QueueState::zeros(5), 200'000, Rng(2));
  const double exact = 5 * (2 * lambda + 2 * lambda * lambda);
  EXPECT_GE(est.mean, 0.0);
  EXPECT_NEAR(est.mean, exact, 5 * est.std_error);
}

TEST(Drift, NoArrivalsIsNegative) {
  auto cfg = config(Topology::circle(6), 0.0);
  cfg.arrivals.kind = ArrivalKind::Deterministic;
  const auto est = measure_drift(cfg, QueueState::uniform(6, 1000), 1000, Rng(3));
  EXPECT_LT(est.mean, 0.0);
}

TEST(Drift, BelowBoundForLargeQueues) {
  const auto cfg = config(Topology::circle(5), 0.37);
  const auto state = QueueState::uniform(5, 10'000);
  const auto est = measure_drift(cfg, state, 100'000, Rng(4));
  const double bound = lyapunov_drift_bound(cfg, state);
  EXPECT_LT(bound, 0.0);
  EXPECT_LT(est.mean + 3 * est.std_error, 0.0);
  EXPECT_LE(est.mean, bound + 3 * est.std_error);
}

TEST(Run, ConservationAndNonNegativity) {
  for (auto v : {Variant{}, Variant{VariantKind::Reshuffle2, 1}, Variant::multi_hop(3), Variant{VariantKind::Saturated, 1}}) {
    auto cfg = config(Topology::circle(6), 0.35, v, 5000, 13);
    cfg.initial = QueueState{5, 0, 2, 0, 0, 9};
    cfg.trace = TraceLevel::Totals;
    std::int64_t arrivals = 0, forwarded = 0, departures = 0;
    std::int64_t last_total = cfg.initial->total();
    cfg.validate();
    run(cfg, [&](const SlotTrace& tr) {
      for (std::size_t i = 0; i < tr.departures.size(); ++i) {
        ASSERT_LE(tr.departures[i], tr.transmissions[i]);
        arrivals += tr.arrivals[i];
        forwarded += tr.forwarded[i];
        departures += tr.departures[i];
      }
      std::int64_t a = 0, f = 0, d = 0;
      for (std::size_t i = 0; i < tr.departures.size(); ++i) {
        a += tr.arrivals[i];
        f += tr.forwarded[i];
        d += tr.departures[i];
      }
      ASSERT_EQ(tr.total_queue, last_total + a + f - d);
      last_total = tr.total_queue;
    });
    const auto res = run(cfg);
    EXPECT_EQ(res.arrivals_total, arrivals);
    EXPECT_EQ(res.final_state.total(), cfg.initial->total() + arrivals + forwarded - departures);
    for (auto q : res.final_state.q) EXPECT_GE(q, 0);
  }
}

TEST(Run, PerNodeConservationStandard) {
  auto cfg = config(Topology::line(5), 0.3, {}, 3000, 21);
  cfg.trace = TraceLevel::Full;
  std::vector<std::int64_t> q(5, 0);
  run(cfg, [&](const SlotTrace& tr) {
    for (std::size_t i = 0; i < 5; ++i) {
      // An empty node never transmits.
      if (q[i] == 0) { ASSERT_EQ(tr.transmissions[i], 0); }
      q[i] += tr.arrivals[i] - tr.departures[i];
      ASSERT_EQ(q[i], tr.queues[i]);
    }
  });
}

TEST(Run, SeededDeterminism) {
  auto cfg = config(Topology::circle(5), 0.4, Variant{VariantKind::Reshuffle3, 1}, 4000, 77);
  cfg.trace = TraceLevel::Full;
  std::vector<std::vector<std::int64_t>> first, second;
  run(cfg, [&](const SlotTrace& tr) { first.push_back(tr.queues); });
  run(cfg, [&](const SlotTrace& tr) { second.push_back(tr.queues); });
  EXPECT_EQ(first, second);
  cfg.seed = 78;
  std::vector<std::vector<std::int64_t>> third;
  run(cfg, [&](const SlotTrace& tr) { third.push_back(tr.queues); });
  EXPECT_NE(first, third);
}

TEST(Run, ZeroLoadDrainsAndStays) {
  auto cfg = config(Topology::line(6), 0.0, {}, 500);
  cfg.initial = QueueState{3, 1, 4, 1, 5, 9};
  bool hit_zero = false;
  cfg.trace = TraceLevel::Totals;
  run(cfg, [&](const SlotTrace& tr) {
    if (hit_zero) { ASSERT_EQ(tr.total_queue, 0); }
    hit_zero = hit_zero || tr.total_queue == 0;
  });
  EXPECT_TRUE(hit_zero);
}

TEST(Run, InhomogeneousRatesWithinPairCondition) {
  auto cfg = config(Topology::circle(6), 0.0, {}, 200'000, 3);
  cfg.arrivals.per_node = {0.3, 0.4, 0.3, 0.4, 0.3, 0.4};
  EXPECT_NEAR(stability_gap(cfg), 0.025, 1e-12);
  const auto res = run(cfg);
  EXPECT_EQ(res.verdict.classification, Classification::StableEvidence) << res.verdict.reason;
}

TEST(Arrivals, MeansAndSecondMoments) {
  for (auto kind : {ArrivalKind::Bernoulli, ArrivalKind::Poisson, ArrivalKind::Geometric, ArrivalKind::Deterministic}) {
    ArrivalModel m{kind, 0.37, {}};
    Rng rng(10);
    const int n = 200'000;
    double sum = 0, sq = 0;
    for (int k = 0; k < n; ++k) {
      const auto x = static_cast<double>(m.draw(0.37, static_cast<std::uint64_t>(k), rng));
      ASSERT_GE(x, 0.0);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = std::max(m.second_moment(0.37) - 0.37 * 0.37, 1e-6);
    EXPECT_NEAR(mean, 0.37, 5 * std::sqrt(var / n) + 1e-5) << to_string(kind);
    EXPECT_NEAR(sq / n, m.second_moment(0.37), 0.02) << to_string(kind);
  }
}

TEST(Arrivals, Validation) {
  EXPECT_THROW((ArrivalModel{ArrivalKind::Bernoulli, 1.5, {}}).validate(3), std::invalid_argument);
  EXPECT_NO_THROW((ArrivalModel{ArrivalKind::Poisson, 1.5, {}}).validate(3));
  EXPECT_THROW((ArrivalModel{ArrivalKind::Poisson, -0.1, {}}).validate(3), std::invalid_argument);
  EXPECT_THROW((ArrivalModel{ArrivalKind::Bernoulli, 0.1, {0.1, 0.2}}).validate(3), std::invalid_argument);
  EXPECT_EQ(parse_arrival_kind("geometric"), ArrivalKind::Geometric);
  EXPECT_THROW(parse_arrival_kind("pareto"), std::invalid_argument);
}

TEST(Variants, Parse) {
  EXPECT_EQ(parse_variant("multihop:4"), Variant::multi_hop(4));
  EXPECT_EQ(to_string(parse_variant("reshuffle2")), "reshuffle2");
  EXPECT_THROW(parse_variant("multihop:0"), std::invalid_argument);
  EXPECT_THROW(parse_variant("reshuffle4"), std::invalid_argument);
}

TEST(Verdict, Classification) {
  std::vector<WindowStat> flat, rising;
  for (int k = 0; k < 20; ++k) {
    flat.push_back({static_cast<std::uint64_t>(k) * 100, 100, 10.0 + (k % 2), 12});
    rising.push_back({static_cast<std::uint64_t>(k) * 100, 100, 50.0 * k, 50 * k});
  }
  EXPECT_EQ(classify(flat, 0, 11, 0.02, 5).classification, Classification::StableEvidence);
  const auto up = classify(rising, 0, 1000, -0.05, 5);
  EXPECT_EQ(up.classification, Classification::UnstableEvidence);
  EXPECT_NEAR(up.growth_rate, 0.5, 1e-9);
  // Rising but not yet ten times the starting total.
  EXPECT_EQ(classify(rising, 500, 1000, -0.05, 5).classification, Classification::Inconclusive);
  // Flat but with the load above capacity.
  EXPECT_EQ(classify(flat, 0, 11, -0.01, 5).classification, Classification::Inconclusive);
}

TEST(Verdict, ReferenceCapacities) {
  EXPECT_EQ(reference_capacity(Topology::circle(5), {}), Rational(2, 5));
  EXPECT_EQ(reference_capacity(Topology::circle(4), Variant::multi_hop(2)), Rational(1, 2));
  EXPECT_EQ(reference_capacity(Topology::line(6), Variant{VariantKind::Reshuffle1, 1}), Rational(26, 54));
  EXPECT_EQ(reference_capacity(Topology::line(6), {}), Rational(1, 2));
}

TEST(Saturated, CircleAndLineThroughput) {
  const auto circle = saturated_throughput(Topology::circle(5), 400'000, Rng(1));
  for (const auto& e : circle) EXPECT_LE(e.z_score(0.4), 4.0);
  for (std::size_t i = 1; i < circle.size(); ++i)
    EXPECT_LE(std::abs(circle[i].mean - circle[0].mean), 5 * std::sqrt(2.0) * circle[0].std_error);
  const auto line = saturated_throughput(Topology::line(4), 400'000, Rng(2));
  EXPECT_LE(line[1].z_score(3.0 / 8.0), 4.0);
  // Deterministic given the seed.
  EXPECT_EQ(saturated_throughput(Topology::line(4), 100'000, Rng(2))[0].mean,
            saturated_throughput(Topology::line(4), 100'000, Rng(2))[0].mean);
}
