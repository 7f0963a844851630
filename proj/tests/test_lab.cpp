#include "csma/lab.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csma;
using namespace csma::lab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("csma_lab_test_" + name)).string();
}

}  // namespace

TEST(Lab, ParkingTableRows) {
  const auto rows = lines(parking_table_csv(21));
  ASSERT_EQ(rows.size(), 23u);
  EXPECT_EQ(rows[0].rfind("# csma_lab 1.0.0 schema=1 command=parking-table", 0), 0u);
  EXPECT_EQ(rows[1], "n,L_num,L_den,C_num,C_den,L_ratio_decimal,C_ratio_decimal");
  EXPECT_EQ(rows[5], "4,2,1,2,1,0.5,0.5");
  EXPECT_EQ(rows[6], "5,37,15,2,1,0.493333333333,0.4");
  for (int n : {20, 21}) {
    const auto& row = rows[static_cast<std::size_t>(n + 1)];
    const double ratio = std::stod(row.substr(row.rfind(',') + 1));
    EXPECT_NEAR(ratio, 0.432332358382, 1e-9) << row;
  }
  EXPECT_THROW(parking_table_csv(65), std::invalid_argument);
}

TEST(Lab, ExactProbJson) {
  std::ostringstream os;
  ASSERT_EQ(cmd_exact_prob({Topology::line(5), "", "d2=1", 10, Format::Json, ""}, os), kExitOk);
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_EQ(doc["numerator"], "11");
  EXPECT_EQ(doc["denominator"], "30");
  EXPECT_EQ(doc["decimal"], "0.366666666667");
  EXPECT_EQ(doc["event"], "d2=1");
  EXPECT_EQ(doc["state"], "11111");
  EXPECT_EQ(doc["version"], "1.0.0");
  EXPECT_THROW(cmd_exact_prob({Topology::line(5), "111", "d2=1", 10, Format::Json, ""}, os), std::invalid_argument);
}

TEST(Lab, WorstCaseJson) {
  std::ostringstream os;
  ASSERT_EQ(cmd_worst_case({Topology::circle(9), "*11111***", "d4=1", "true", 10, Format::Json, ""}, os), kExitOk);
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_EQ(doc["fraction"], "179/420");
  EXPECT_EQ(doc["completions_checked"], 16);
}

TEST(Lab, VerifyLemmasExitAndReport) {
  VerifyOptions opt;
  opt.lemma.cap = 3;
  opt.out = temp_path("lemmas.json");
  std::ostringstream os;
  EXPECT_EQ(cmd_verify_lemmas(opt, os), kExitOk);
  EXPECT_NE(os.str().find("all suites passed"), std::string::npos);
  const auto doc = nlohmann::json::parse(read_file(opt.out));
  EXPECT_TRUE(doc["ok"].get<bool>());
  EXPECT_GE(doc["suites"].size(), 10u);
  std::filesystem::remove(opt.out);
}

TEST(Lab, AtomicWriteReplacesAndCleansUp) {
  const auto path = temp_path("atomic.txt");
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  EXPECT_EQ(read_file(path), "second\n");
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::temp_directory_path()))
    EXPECT_EQ(entry.path().string().find(path + ".tmp"), std::string::npos);
  std::filesystem::remove(path);
  EXPECT_THROW(write_atomic("/nonexistent-dir/x.csv", "x"), IoError);
}

TEST(Lab, SimulateOutputsAreReproducible) {
  SimulateOptions opt;
  opt.config.topology = Topology::circle(5);
  opt.config.arrivals.lambda = 0.3;
  opt.config.horizon = 2000;
  opt.config.seed = 9;
  opt.config.trace = sim::TraceLevel::Full;
  opt.out = temp_path("sim_a");
  std::ostringstream os;
  ASSERT_EQ(cmd_simulate(opt, os), kExitOk);
  const auto first = read_file(opt.out + ".trajectory.csv");
  const auto summary = nlohmann::json::parse(read_file(opt.out + ".summary.json"));
  ASSERT_EQ(cmd_simulate(opt, os), kExitOk);
  EXPECT_EQ(read_file(opt.out + ".trajectory.csv"), first);

  const auto rows = lines(first);
  ASSERT_EQ(rows.size(), 2002u);
  EXPECT_EQ(rows[1], "slot,total_queue,max_queue,lyapunov,departures_total,q1,q2,q3,q4,q5,d1,d2,d3,d4,d5,a1,a2,a3,a4,a5");
  EXPECT_EQ(summary["seed"], 9);
  EXPECT_EQ(summary["config"]["n"], 5);
  EXPECT_EQ(summary["per_node_throughput"].size(), 5u);
  EXPECT_TRUE(summary.contains("verdict"));
  EXPECT_TRUE(summary.contains("growth_rate"));

  // Without per-slot tracing only the window ends are written.
  opt.config.trace = sim::TraceLevel::None;
  ASSERT_EQ(cmd_simulate(opt, os), kExitOk);
  EXPECT_EQ(lines(read_file(opt.out + ".trajectory.csv")).size(), 22u);
  std::filesystem::remove(opt.out + ".trajectory.csv");
  std::filesystem::remove(opt.out + ".summary.json");
}

TEST(Lab, SimulateRejectsBadConfig) {
  SimulateOptions opt;
  opt.config.topology = Topology::line(4);
  opt.config.variant = sim::Variant::multi_hop(2);
  std::ostringstream os;
  EXPECT_THROW(cmd_simulate(opt, os), std::invalid_argument);
}

TEST(Lab, GridParsing) {
  const auto grid = parse_lambda_grid("0.30:0.48:0.02");
  ASSERT_EQ(grid.size(), 10u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.30);
  EXPECT_DOUBLE_EQ(grid.back(), 0.48);
  EXPECT_EQ(parse_lambda_grid("0.1, 0.2").size(), 2u);
  EXPECT_TRUE(parse_lambda_grid("").empty());
  EXPECT_EQ(parse_int_range("4:8"), (std::vector<int>{4, 5, 6, 7, 8}));
  EXPECT_EQ(parse_int_range("4,6"), (std::vector<int>{4, 6}));
  EXPECT_THROW(parse_int_range("0:2"), std::invalid_argument);
  EXPECT_THROW(parse_lambda_grid("0.1:0.2"), std::invalid_argument);
}

TEST(Lab, RowSeedsDependOnKeyOnly) {
  EXPECT_EQ(row_seed(1, "circle/n=5"), row_seed(1, "circle/n=5"));
  EXPECT_NE(row_seed(1, "circle/n=5"), row_seed(1, "circle/n=6"));
  EXPECT_NE(row_seed(1, "circle/n=5"), row_seed(2, "circle/n=5"));
}

TEST(Lab, EmptySweepIsHeaderOnly) {
  SweepOptions opt;
  std::ostringstream os;
  ASSERT_EQ(cmd_sweep(opt, os), kExitOk);
  const auto rows = lines(os.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].rfind("# csma_lab", 0), 0u);
  EXPECT_EQ(rows[1].rfind("topology,n,lambda,variant,verdict,growth_rate", 0), 0u);
}

TEST(Lab, SweepThresholdOnFiveCircle) {
  SweepOptions opt;
  opt.lambdas = parse_lambda_grid("0.30:0.48:0.02");
  opt.horizon = 1'000'000;
  const auto rows = run_sweep(opt);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    if (r.lambda <= 0.40 + 1e-12) {
      EXPECT_NE(r.verdict, sim::Classification::UnstableEvidence) << r.lambda;
    }
    if (r.lambda < 0.40 - 1e-12) {
      EXPECT_EQ(r.verdict, sim::Classification::StableEvidence) << r.lambda;
    }
    if (r.lambda >= 0.42 - 1e-12) {
      EXPECT_EQ(r.verdict, sim::Classification::UnstableEvidence) << r.lambda;
    }
  }
}

TEST(Lab, SweepBelowThreeEighthsIsStable) {
  SweepOptions opt;
  opt.kinds = {TopologyKind::Circle, TopologyKind::Line};
  opt.sizes = {4, 5, 6, 7, 8};
  opt.lambdas = {0.30, 0.35, 0.37};
  opt.horizon = 200'000;
  const auto rows = run_sweep(opt);
  ASSERT_EQ(rows.size(), 30u);
  for (const auto& r : rows)
    EXPECT_EQ(r.verdict, sim::Classification::StableEvidence) << to_string(r.kind) << " n=" << r.n << " " << r.lambda;
}

TEST(Lab, SweepIsDeterministicAcrossThreadCounts) {
  SweepOptions opt;
  opt.sizes = {4, 5};
  opt.lambdas = {0.3, 0.45};
  opt.horizon = 20'000;
  opt.replications = 2;
  opt.threads = 1;
  const auto one = sweep_csv(opt, run_sweep(opt));
  opt.threads = 3;
  EXPECT_EQ(sweep_csv(opt, run_sweep(opt)), one);
}
