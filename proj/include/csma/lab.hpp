#pragma once

// Command implementations behind the csma_lab executable. Each command
// validates its options, computes, and writes CSV or JSON either to a file
// (atomically, through a temporary sibling) or to the given stream.

#include "csma/access.hpp"
#include "csma/lemmas.hpp"
#include "csma/queue_sim.hpp"
#include "csma/topology.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csma::lab {

inline constexpr std::string_view kToolName = "csma_lab";
inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitViolation = 2, kExitInvalidConfig = 3, kExitIo = 4 };

/// File-system failure; maps to kExitIo.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

Format parse_format(std::string_view text);

/// Writes `content` to a temporary file next to `path`, then renames it over
/// `path`. Throws IoError.
void write_atomic(const std::string& path, std::string_view content);

/// Shortest round-tripping decimal, '.' separator, independent of locale.
std::string format_double(double x);

/// "# csma_lab <version> schema=<n> command=<cmd> seed=<seed> config=<json>".
std::string header_line(std::string_view command, std::uint64_t seed, const std::string& config_json);

/// Parses "a:b:step" or a comma list; the empty string gives an empty grid.
std::vector<double> parse_lambda_grid(std::string_view text);

/// Parses "a:b", "a-b" or a comma list of positive integers.
std::vector<int> parse_int_range(std::string_view text);

/// Per-row seed derived from the master seed and a textual row key.
std::uint64_t row_seed(std::uint64_t master, std::string_view key);

struct ParkingTableOptions {
  int max_n = 20;
  Format format = Format::Csv;
  std::string out;  // empty: write to the stream
};

struct ExactProbOptions {
  Topology topology = Topology::line(3);
  std::string state;  // occupancy string; empty = all occupied
  std::string event;
  int cap = access::kDefaultEnumerationCap;
  Format format = Format::Json;
  std::string out;
};

struct WorstCaseOptions {
  Topology topology = Topology::circle(9);
  std::string mask;  // '0', '1', '*'
  std::string event;
  std::string filter = "true";
  int cap = access::kDefaultEnumerationCap;
  Format format = Format::Json;
  std::string out;
};

struct VerifyOptions {
  lemmas::LemmaOptions lemma;
  bool verbose = false;
  Format format = Format::Json;
  std::string out;  // full report with every check
};

struct SimulateOptions {
  sim::SimConfig config;
  Format format = Format::Json;  // summary format
  /// Output prefix: <out>.trajectory.csv and <out>.summary.<json|csv>.
  /// Empty: the summary goes to the stream and no trajectory is written.
  std::string out;
};

struct SweepOptions {
  std::vector<TopologyKind> kinds = {TopologyKind::Circle};
  std::vector<int> sizes = {5};
  std::vector<double> lambdas;
  sim::Variant variant;
  sim::ArrivalKind arrivals = sim::ArrivalKind::Bernoulli;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  int replications = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out;
};

struct SaturatedOptions {
  Topology topology = Topology::line(100);
  std::uint64_t slots = 1'000'000;
  std::uint64_t seed = 1;
  Format format = Format::Csv;
  std::string out;
};

// Each returns an ExitCode. Invalid options throw std::invalid_argument
// (kExitInvalidConfig); output failures throw IoError (kExitIo).
int cmd_parking_table(const ParkingTableOptions& opt, std::ostream& os);
int cmd_exact_prob(const ExactProbOptions& opt, std::ostream& os);
int cmd_worst_case(const WorstCaseOptions& opt, std::ostream& os);
int cmd_verify_lemmas(const VerifyOptions& opt, std::ostream& os);
int cmd_simulate(const SimulateOptions& opt, std::ostream& os);
int cmd_sweep(const SweepOptions& opt, std::ostream& os);
int cmd_saturated_throughput(const SaturatedOptions& opt, std::ostream& os);

// Building blocks, exposed for tests.
std::string parking_table_csv(int max_n);

struct SweepRow {
  TopologyKind kind = TopologyKind::Circle;
  int n = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  sim::Classification verdict = sim::Classification::Inconclusive;
  double growth_rate = 0.0;
  double growth_std_error = 0.0;
  int stable_runs = 0;
  int unstable_runs = 0;
};

std::vector<SweepRow> run_sweep(const SweepOptions& opt);
std::string sweep_csv(const SweepOptions& opt, const std::vector<SweepRow>& rows);

}  // namespace csma::lab
