#pragma once

// Executable checks of the combinatorial claims: parking-sequence
// monotonicity and bounds, friend/foe comparisons, edge bounds, the
// conditional-priority inequality, the neighbour-pair bound and the proof
// constants. Every check records the exact values it compared.

#include "csma/access.hpp"
#include "csma/parking.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace csma::lemmas {

inline constexpr int kDefaultLemmaCap = 9;

struct Check {
  std::string text;
  bool passed = true;
};

struct SuiteResult {
  std::string name;
  std::string claim;
  std::vector<Check> checks;
  std::string skipped;  // non-empty when the cap excludes every instance
  double seconds = 0.0;

  std::size_t failures() const noexcept;
  bool ok() const noexcept { return failures() == 0; }
  void add(bool passed, std::string text) { checks.push_back({std::move(text), passed}); }
};

struct LemmaOptions {
  int cap = kDefaultLemmaCap;                   // largest enumerated ranking size
  int table_cap = parking::kDefaultTableCap;    // largest n for closed-form suites
  std::uint64_t seed = 1;                       // Monte Carlo suite
  std::uint64_t mc_samples = 200'000;
};

struct LemmaReport {
  LemmaOptions options;
  std::vector<SuiteResult> suites;

  bool ok() const noexcept;
  std::size_t total_checks() const noexcept;
  std::size_t total_failures() const noexcept;
};

using SuiteObserver = std::function<void(const SuiteResult&)>;

// Closed-form suites (bounded by table_cap).
SuiteResult suite_line_monotonicity(int table_cap);
SuiteResult suite_subadditivity(int table_cap);
SuiteResult suite_circle_below_line(int table_cap);
SuiteResult suite_circle_lower_bound(int table_cap);
SuiteResult suite_circle_closed_form(int table_cap);
SuiteResult suite_alternating_ratios(int table_cap);
SuiteResult suite_limit_constant();

// Enumeration suites (bounded by cap).
SuiteResult suite_line_oracle(int cap);
SuiteResult suite_partial_segments(int cap);
SuiteResult suite_resolve_invariants(int cap);
SuiteResult suite_friend_foe(int cap);
SuiteResult suite_edge_bounds(int cap);
SuiteResult suite_conditional_priority(int cap);
SuiteResult suite_pair_bound(int cap);
SuiteResult suite_isolated_pair(int cap);
SuiteResult suite_golden_constants(int cap);
SuiteResult suite_worst_case(int cap);
SuiteResult suite_construction_laws(int cap);
SuiteResult suite_monte_carlo(int cap, std::uint64_t seed, std::uint64_t samples);

/// Runs every suite in a fixed order; the observer sees each as it finishes.
LemmaReport verify_lemmas(const LemmaOptions& options = {}, const SuiteObserver& observer = {});

/// Plain-text rendering; `verbose` lists every check, otherwise failures only.
std::string render_report(const LemmaReport& report, bool verbose);

}  // namespace csma::lemmas
