// csma_lab: exact parking and access computations, lemma checks,
// simulations and sweeps for CSMA on circles and lines.

#include "csma/lab.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace csma;

struct Common {
  std::string topology = "circle";
  int n = 5;
  std::string format;
  std::string out;
  int cap = access::kDefaultEnumerationCap;
  std::uint64_t seed = 1;
};

lab::Format format_or(const std::string& text, lab::Format fallback) {
  return text.empty() ? fallback : lab::parse_format(text);
}

Topology make_topology(const Common& c) {
  if (c.n < 1) throw std::invalid_argument("--n must be at least 1");
  return Topology(parse_topology_kind(c.topology), c.n);
}

void add_topology(CLI::App* app, Common& c) {
  app->add_option("--topology", c.topology, "circle or line")->check(CLI::IsMember({"circle", "line"}));
  app->add_option("--n", c.n, "number of nodes");
}

void add_output(CLI::App* app, Common& c, std::string_view formats = "csv or json") {
  app->add_option("--format", c.format, std::string(formats))->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "output path (default: standard output)");
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  if (!text.empty()) rates = lab::parse_lambda_grid(text);
  return rates;
}

std::vector<std::int64_t> parse_queues(const std::string& text) {
  std::vector<std::int64_t> q;
  for (const auto& part : CLI::detail::split(text, ',')) {
    std::size_t used = 0;
    const long long v = std::stoll(part, &used);
    if (used != part.size()) throw std::invalid_argument("initial queue lengths must be integers");
    q.push_back(v);
  }
  return q;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated analysis of CSMA medium access on circles and lines"};
  app.set_version_flag("--version", std::string(lab::kToolVersion));
  app.require_subcommand(1);

  // parking-table
  Common park;
  int max_n = 20;
  auto* parking = app.add_subcommand("parking-table", "exact L_n, C_n and ratios as CSV or JSON");
  parking->add_option("--max-n", max_n, "largest n (at most 64)");
  add_output(parking, park);

  // exact-prob
  Common ex;
  ex.topology = "line";
  ex.n = 3;
  std::string ex_state, ex_event;
  auto* exact = app.add_subcommand("exact-prob", "exact probability of an event by enumerating rankings");
  add_topology(exact, ex);
  exact->add_option("--state", ex_state, "occupancy such as 1101 (default: all occupied)");
  exact->add_option("--event", ex_event, "event such as 'd2=1 & u3<u4'")->required();
  exact->add_option("--cap", ex.cap, "largest n enumerated");
  add_output(exact, ex);

  // worst-case
  Common wc;
  wc.n = 9;
  std::string wc_mask, wc_event, wc_filter = "true";
  auto* worst = app.add_subcommand("worst-case", "smallest event probability over completions of a mask");
  add_topology(worst, wc);
  worst->add_option("--mask", wc_mask, "occupancy mask over 0, 1 and * (free)")->required();
  worst->add_option("--event", wc_event, "event to minimise")->required();
  worst->add_option("--filter", wc_filter, "occupancy condition a completion must satisfy");
  worst->add_option("--cap", wc.cap, "largest n enumerated");
  add_output(worst, wc);

  // verify-lemmas
  Common ver;
  ver.cap = lemmas::kDefaultLemmaCap;
  bool verbose = false;
  int table_cap = parking::kDefaultTableCap;
  std::uint64_t mc_samples = 200'000;
  auto* verify = app.add_subcommand("verify-lemmas", "run every lemma suite; exit status 2 on any violation");
  verify->add_option("--cap", ver.cap, "largest enumerated segment or circle (at most 10)");
  verify->add_option("--table-cap", table_cap, "largest n for closed-form suites");
  verify->add_option("--seed", ver.seed, "seed for the Monte Carlo suite");
  verify->add_option("--samples", mc_samples, "Monte Carlo samples per event");
  verify->add_flag("--verbose,-v", verbose, "list every check");
  add_output(verify, ver);

  // simulate
  Common simc;
  double lambda = 0.38;
  std::string arrivals = "bernoulli", variant = "standard", trace = "none", rates, initial;
  std::uint64_t horizon = 1'000'000;
  auto* simulate = app.add_subcommand("simulate", "simulate the queueing network and classify stability");
  add_topology(simulate, simc);
  simulate->add_option("--lambda", lambda, "arrival rate per node and slot");
  simulate->add_option("--rates", rates, "per-node arrival rates, comma separated");
  simulate->add_option("--arrivals", arrivals, "bernoulli, poisson, geometric or deterministic")
      ->check(CLI::IsMember({"bernoulli", "poisson", "geometric", "deterministic"}));
  simulate->add_option("--variant", variant, "standard, reshuffle1..3, saturated or multihop:<m>");
  simulate->add_option("--horizon", horizon, "number of slots");
  simulate->add_option("--seed", simc.seed, "random seed");
  simulate->add_option("--initial", initial, "initial queue lengths, comma separated");
  simulate->add_option("--trace-level", trace, "none, totals or full")->check(CLI::IsMember({"none", "totals", "full"}));
  simulate->add_option("--format", simc.format, "summary format, csv or json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--out", simc.out, "output prefix for <out>.trajectory.csv and <out>.summary.*");

  // sweep
  std::string sw_topology = "circle", n_range = "5", grid, sw_variant = "standard", sw_arrivals = "bernoulli", sw_out;
  std::uint64_t sw_horizon = 1'000'000, sw_seed = 1;
  int replications = 1;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "stability verdicts over a grid of n and lambda");
  sweep->add_option("--topology", sw_topology, "circle, line or both")->check(CLI::IsMember({"circle", "line", "both"}));
  sweep->add_option("--n-range,--n", n_range, "node counts: a:b or a comma list");
  sweep->add_option("--lambda-grid", grid, "start:stop:step or a comma list; empty gives no rows");
  sweep->add_option("--variant", sw_variant, "standard, reshuffle1..3, saturated or multihop:<m>");
  sweep->add_option("--arrivals", sw_arrivals, "bernoulli, poisson, geometric or deterministic")
      ->check(CLI::IsMember({"bernoulli", "poisson", "geometric", "deterministic"}));
  sweep->add_option("--horizon", sw_horizon, "slots per run");
  sweep->add_option("--seed", sw_seed, "master seed; each row derives its own");
  sweep->add_option("--replications", replications, "independent runs per grid point");
  sweep->add_option("--threads", threads, "worker threads (default: all cores)");
  sweep->add_option("--out", sw_out, "CSV output path (default: standard output)");

  // saturated-throughput
  Common sat;
  sat.topology = "line";
  sat.n = 100;
  std::uint64_t slots = 1'000'000;
  auto* saturated = app.add_subcommand("saturated-throughput", "per-node transmission frequency with all nodes busy");
  add_topology(saturated, sat);
  saturated->add_option("--slots,--horizon", slots, "number of slots");
  saturated->add_option("--seed", sat.seed, "random seed");
  add_output(saturated, sat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lab::kExitInvalidConfig;
  }

  try {
    std::ostream& os = std::cout;
    if (*parking) {
      return lab::cmd_parking_table({max_n, format_or(park.format, lab::Format::Csv), park.out}, os);
    }
    if (*exact) {
      return lab::cmd_exact_prob({make_topology(ex), ex_state, ex_event, ex.cap, format_or(ex.format, lab::Format::Json), ex.out},
                                 os);
    }
    if (*worst) {
      return lab::cmd_worst_case(
          {make_topology(wc), wc_mask, wc_event, wc_filter, wc.cap, format_or(wc.format, lab::Format::Json), wc.out}, os);
    }
    if (*verify) {
      lab::VerifyOptions opt;
      opt.lemma.cap = ver.cap;
      opt.lemma.table_cap = table_cap;
      opt.lemma.seed = ver.seed;
      opt.lemma.mc_samples = mc_samples;
      opt.verbose = verbose;
      opt.format = format_or(ver.format, lab::Format::Json);
      opt.out = ver.out;
      return lab::cmd_verify_lemmas(opt, os);
    }
    if (*simulate) {
      lab::SimulateOptions opt;
      auto& cfg = opt.config;
      cfg.topology = make_topology(simc);
      cfg.arrivals.kind = sim::parse_arrival_kind(arrivals);
      cfg.arrivals.lambda = lambda;
      cfg.arrivals.per_node = parse_rates(rates);
      cfg.variant = sim::parse_variant(variant);
      cfg.horizon = horizon;
      cfg.seed = simc.seed;
      cfg.trace = sim::parse_trace_level(trace);
      if (!initial.empty()) {
        cfg.initial = sim::QueueState(parse_queues(initial));
      }
      opt.format = format_or(simc.format, lab::Format::Json);
      opt.out = simc.out;
      return lab::cmd_simulate(opt, os);
    }
    if (*sweep) {
      lab::SweepOptions opt;
      if (sw_topology == "both") {
        opt.kinds = {TopologyKind::Circle, TopologyKind::Line};
      } else {
        opt.kinds = {parse_topology_kind(sw_topology)};
      }
      opt.sizes = lab::parse_int_range(n_range);
      opt.lambdas = lab::parse_lambda_grid(grid);
      opt.variant = sim::parse_variant(sw_variant);
      opt.arrivals = sim::parse_arrival_kind(sw_arrivals);
      opt.horizon = sw_horizon;
      opt.seed = sw_seed;
      opt.replications = replications;
      opt.threads = threads;
      opt.out = sw_out;
      return lab::cmd_sweep(opt, os);
    }
    if (*saturated) {
      return lab::cmd_saturated_throughput(
          {make_topology(sat), slots, sat.seed, format_or(sat.format, lab::Format::Csv), sat.out}, os);
    }
  } catch (const lab::IoError& e) {
    std::cerr << "csma_lab: " << e.what() << "\n";
    return lab::kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "csma_lab: " << e.what() << "\n";
    return lab::kExitInvalidConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "csma_lab: " << e.what() << "\n";
    return lab::kExitInvalidConfig;
  }
  return lab::kExitInvalidConfig;
}
