#include "csma/lab.hpp"

#include "csma/parking.hpp"
#include "csma/rng.hpp"

#include <json.hpp>

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace csma::lab {

using Json = nlohmann::ordered_json;

namespace {

// Stream into a temporary sibling of the target; commit() renames it into
// place, destruction without commit removes it.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path)
      : path_(std::move(path)), tmp_(path_ + ".tmp." + std::to_string(::getpid())) {
    stream_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw IoError("cannot open '" + tmp_ + "' for writing");
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;
  ~AtomicFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  std::ostream& stream() { return stream_; }

  void commit() {
    stream_.flush();
    if (!stream_) throw IoError("write to '" + tmp_ + "' failed");
    stream_.close();
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot rename '" + tmp_ + "' to '" + path_ + "': " + ec.message());
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream stream_;
  bool committed_ = false;
};

void emit(const std::string& out, std::ostream& os, std::string_view content) {
  if (out.empty()) {
    os << content;
    if (!os) throw IoError("write to standard output failed");
  } else {
    write_atomic(out, content);
  }
}

std::string_view trace_name(sim::TraceLevel level) {
  switch (level) {
    case sim::TraceLevel::None:
      return "none";
    case sim::TraceLevel::Totals:
      return "totals";
    case sim::TraceLevel::Full:
      return "full";
  }
  return "?";
}

Json tool_fields(std::string_view command, std::uint64_t seed) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["rng"] = kRngAlgorithm;
  return j;
}

Json sim_config_json(const sim::SimConfig& cfg) {
  Json j;
  j["topology"] = to_string(cfg.topology.kind());
  j["n"] = cfg.topology.size();
  j["arrivals"] = sim::to_string(cfg.arrivals.kind);
  j["lambda"] = cfg.arrivals.lambda;
  if (!cfg.arrivals.per_node.empty()) j["per_node_lambda"] = cfg.arrivals.per_node;
  j["variant"] = sim::to_string(cfg.variant);
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  if (cfg.initial) j["initial"] = cfg.initial->q;
  j["trace"] = trace_name(cfg.trace);
  return j;
}

Json rational_fields(const Rational& p) {
  Json j;
  j["numerator"] = numerator_of(p).str();
  j["denominator"] = denominator_of(p).str();
  j["fraction"] = to_fraction_string(p);
  j["decimal"] = to_decimal_string(p);
  return j;
}

std::string csv_escape(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fnum(double x) { return format_double(x); }

}  // namespace

// --------------------------------------------------------------- plumbing

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected csv or json)");
}

void write_atomic(const std::string& path, std::string_view content) {
  AtomicFile file(path);
  file.stream().write(content.data(), static_cast<std::streamsize>(content.size()));
  file.commit();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string header_line(std::string_view command, std::uint64_t seed, const std::string& config_json) {
  std::string line = "# ";
  line += kToolName;
  line += " ";
  line += kToolVersion;
  line += " schema=" + std::to_string(kSchemaVersion) + " command=" + std::string(command) +
          " seed=" + std::to_string(seed) + " rng=" + std::string(kRngAlgorithm) + " config=" + config_json + "\n";
  return line;
}

namespace {

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> parse_lambda_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> grid;
  if (text.empty()) return grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("lambda grid range must be start:stop:step");
    const double start = parse_double(trim(parts[0]));
    const double stop = parse_double(trim(parts[1]));
    const double step = parse_double(trim(parts[2]));
    if (!(step > 0.0)) throw std::invalid_argument("lambda grid step must be positive");
    if (stop < start) return grid;
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long k = 0; k < count; ++k) grid.push_back(std::round((start + k * step) * 1e12) / 1e12);
    return grid;
  }
  for (auto part : split(text, ',')) {
    part = trim(part);
    if (!part.empty()) grid.push_back(parse_double(part));
  }
  return grid;
}

std::vector<int> parse_int_range(std::string_view text) {
  text = trim(text);
  std::vector<int> values;
  if (text.empty()) return values;
  const char range_sep = text.find(':') != std::string_view::npos ? ':' : '-';
  if (text.find(',') == std::string_view::npos && text.find(range_sep) != std::string_view::npos) {
    const auto parts = split(text, range_sep);
    if (parts.size() != 2) throw std::invalid_argument("range must be a:b");
    const int a = parse_int(trim(parts[0]));
    const int b = parse_int(trim(parts[1]));
    for (int v = a; v <= b; ++v) values.push_back(v);
  } else {
    for (auto part : split(text, ',')) {
      part = trim(part);
      if (!part.empty()) values.push_back(parse_int(part));
    }
  }
  for (int v : values)
    if (v < 1) throw std::invalid_argument("node counts must be positive");
  return values;
}

std::uint64_t row_seed(std::uint64_t master, std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(master ^ mix64(h));
}

// ----------------------------------------------------------- parking table

std::string parking_table_csv(int max_n) {
  if (max_n < 1 || max_n > parking::kDefaultTableCap)
    throw std::invalid_argument("max_n must be between 1 and " + std::to_string(parking::kDefaultTableCap));
  Json cfg;
  cfg["max_n"] = max_n;
  std::ostringstream out;
  out << header_line("parking-table", 0, cfg.dump());
  out << "n,L_num,L_den,C_num,C_den,L_ratio_decimal,C_ratio_decimal\n";
  const parking::ParkingTable table(max_n);
  for (int n = 1; n <= max_n; ++n) {
    const auto& row = table.row(n);
    out << n << ',' << numerator_of(row.line) << ',' << denominator_of(row.line) << ',' << numerator_of(row.circle)
        << ',' << denominator_of(row.circle) << ',' << to_decimal_string(row.line_ratio) << ','
        << to_decimal_string(row.circle_ratio) << '\n';
  }
  return out.str();
}

int cmd_parking_table(const ParkingTableOptions& opt, std::ostream& os) {
  if (opt.format == Format::Csv) {
    emit(opt.out, os, parking_table_csv(opt.max_n));
    return kExitOk;
  }
  if (opt.max_n < 1 || opt.max_n > parking::kDefaultTableCap)
    throw std::invalid_argument("max_n must be between 1 and " + std::to_string(parking::kDefaultTableCap));
  Json doc = tool_fields("parking-table", 0);
  doc["config"] = Json{{"max_n", opt.max_n}};
  Json rows = Json::array();
  const parking::ParkingTable table(opt.max_n);
  for (int n = 1; n <= opt.max_n; ++n) {
    const auto& row = table.row(n);
    Json r;
    r["n"] = n;
    r["L"] = to_fraction_string(row.line);
    r["C"] = to_fraction_string(row.circle);
    r["L_ratio"] = to_fraction_string(row.line_ratio);
    r["C_ratio"] = to_fraction_string(row.circle_ratio);
    r["L_ratio_decimal"] = to_decimal_string(row.line_ratio);
    r["C_ratio_decimal"] = to_decimal_string(row.circle_ratio);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  doc["limit"] = to_decimal_string(parking::limit_constant().value);
  emit(opt.out, os, doc.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------ exact probabilities

int cmd_exact_prob(const ExactProbOptions& opt, std::ostream& os) {
  const Topology& t = opt.topology;
  const auto s = opt.state.empty() ? OccupancyState::all(t.size(), true) : OccupancyState::parse(opt.state);
  if (s.size() != t.size())
    throw std::invalid_argument("state has " + std::to_string(s.size()) + " nodes but the topology has " +
                                std::to_string(t.size()));
  if (opt.event.empty()) throw std::invalid_argument("an event is required");
  const auto event = EventPredicate::parse(opt.event);
  const auto hits = access::count_rankings(t, s, event, opt.cap);
  const Rational p(BigInt(hits), factorial(static_cast<unsigned>(t.size())));

  Json cfg;
  cfg["topology"] = to_string(t.kind());
  cfg["n"] = t.size();
  cfg["state"] = s.to_string();
  cfg["event"] = event.to_string();
  cfg["cap"] = opt.cap;
  if (opt.format == Format::Csv) {
    std::ostringstream out;
    out << header_line("exact-prob", 0, cfg.dump());
    out << "topology,n,state,event,numerator,denominator,decimal,hits\n";
    out << to_string(t.kind()) << ',' << t.size() << ',' << s.to_string() << ',' << csv_escape(event.to_string()) << ','
        << numerator_of(p) << ',' << denominator_of(p) << ',' << to_decimal_string(p) << ',' << hits << '\n';
    emit(opt.out, os, out.str());
    return kExitOk;
  }
  Json doc = tool_fields("exact-prob", 0);
  doc["config"] = cfg;
  doc.update(rational_fields(p));
  doc["event"] = event.to_string();
  doc["state"] = s.to_string();
  doc["rankings_hit"] = hits;
  doc["rankings_total"] = factorial(static_cast<unsigned>(t.size())).str();
  emit(opt.out, os, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_worst_case(const WorstCaseOptions& opt, std::ostream& os) {
  const Topology& t = opt.topology;
  const auto mask = access::OccupancyMask::parse(opt.mask);
  if (mask.size() != t.size())
    throw std::invalid_argument("mask has " + std::to_string(mask.size()) + " nodes but the topology has " +
                                std::to_string(t.size()));
  if (opt.event.empty()) throw std::invalid_argument("an event is required");
  const auto event = EventPredicate::parse(opt.event);
  const auto filter = EventPredicate::parse(opt.filter.empty() ? "true" : opt.filter);
  const auto wc = access::worst_case_probability(t, mask, event, filter, opt.cap);

  Json cfg;
  cfg["topology"] = to_string(t.kind());
  cfg["n"] = t.size();
  cfg["mask"] = mask.to_string();
  cfg["event"] = event.to_string();
  cfg["filter"] = filter.to_string();
  cfg["cap"] = opt.cap;
  if (opt.format == Format::Csv) {
    std::ostringstream out;
    out << header_line("worst-case", 0, cfg.dump());
    out << "topology,n,mask,event,filter,numerator,denominator,decimal,state,completions_checked\n";
    out << to_string(t.kind()) << ',' << t.size() << ',' << mask.to_string() << ',' << csv_escape(event.to_string())
        << ',' << csv_escape(filter.to_string()) << ',' << numerator_of(wc.probability) << ','
        << denominator_of(wc.probability) << ',' << to_decimal_string(wc.probability) << ',' << wc.state.to_string()
        << ',' << wc.completions_checked << '\n';
    emit(opt.out, os, out.str());
    return kExitOk;
  }
  Json doc = tool_fields("worst-case", 0);
  doc["config"] = cfg;
  doc.update(rational_fields(wc.probability));
  doc["event"] = event.to_string();
  doc["filter"] = filter.to_string();
  doc["mask"] = mask.to_string();
  doc["state"] = wc.state.to_string();
  doc["completions_checked"] = wc.completions_checked;
  emit(opt.out, os, doc.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------ verification

int cmd_verify_lemmas(const VerifyOptions& opt, std::ostream& os) {
  const auto report = lemmas::verify_lemmas(opt.lemma);
  os << lemmas::render_report(report, opt.verbose);
  if (!os) throw IoError("write to standard output failed");
  if (!opt.out.empty()) {
    Json cfg;
    cfg["cap"] = opt.lemma.cap;
    cfg["table_cap"] = opt.lemma.table_cap;
    cfg["mc_samples"] = opt.lemma.mc_samples;
    if (opt.format == Format::Csv) {
      std::ostringstream out;
      out << header_line("verify-lemmas", opt.lemma.seed, cfg.dump());
      out << "suite,passed,check\n";
      for (const auto& s : report.suites)
        for (const auto& c : s.checks) out << s.name << ',' << (c.passed ? 1 : 0) << ',' << csv_escape(c.text) << '\n';
      write_atomic(opt.out, out.str());
    } else {
      Json doc = tool_fields("verify-lemmas", opt.lemma.seed);
      doc["config"] = cfg;
      doc["ok"] = report.ok();
      doc["total_checks"] = report.total_checks();
      doc["failures"] = report.total_failures();
      Json suites = Json::array();
      for (const auto& s : report.suites) {
        Json js;
        js["name"] = s.name;
        js["claim"] = s.claim;
        js["status"] = !s.skipped.empty() ? "skipped" : (s.ok() ? "passed" : "failed");
        if (!s.skipped.empty()) js["skipped"] = s.skipped;
        Json checks = Json::array();
        for (const auto& c : s.checks) checks.push_back(Json{{"passed", c.passed}, {"check", c.text}});
        js["checks"] = std::move(checks);
        suites.push_back(std::move(js));
      }
      doc["suites"] = std::move(suites);
      write_atomic(opt.out, doc.dump(2) + "\n");
    }
  }
  return report.ok() ? kExitOk : kExitViolation;
}

// -------------------------------------------------------------- simulation

int cmd_simulate(const SimulateOptions& opt, std::ostream& os) {
  opt.config.validate();
  sim::SimConfig cfg = opt.config;
  const Json cfg_json = sim_config_json(opt.config);
  const int n = cfg.topology.size();

  std::optional<AtomicFile> trajectory;
  std::int64_t departures = 0;
  if (!opt.out.empty()) {
    trajectory.emplace(opt.out + ".trajectory.csv");
    auto& ts = trajectory->stream();
    ts << header_line("simulate", cfg.seed, cfg_json.dump());
    ts << "slot,total_queue,max_queue,lyapunov,departures_total";
    if (opt.config.trace == sim::TraceLevel::Full) {
      for (int i = 1; i <= n; ++i) ts << ",q" << i;
      for (int i = 1; i <= n; ++i) ts << ",d" << i;
      for (int i = 1; i <= n; ++i) ts << ",a" << i;
    }
    ts << '\n';
    if (cfg.trace == sim::TraceLevel::None) cfg.trace = sim::TraceLevel::Totals;
  }
  // Without per-slot tracing only the ends of the verdict windows are kept.
  const std::uint64_t windows = std::min<std::uint64_t>(sim::kVerdictWindows, cfg.horizon);
  const std::uint64_t window_len = cfg.horizon / windows;
  const bool every_slot = opt.config.trace != sim::TraceLevel::None;

  sim::TraceObserver observer;
  if (trajectory) {
    observer = [&](const sim::SlotTrace& tr) {
      for (auto d : tr.departures) departures += d;
      const std::uint64_t done = tr.slot + 1;
      const bool window_end = done == cfg.horizon || (done % window_len == 0 && done / window_len < windows);
      if (!every_slot && !window_end) return;
      auto& ts = trajectory->stream();
      ts << tr.slot << ',' << tr.total_queue << ',' << tr.max_queue << ',' << tr.lyapunov << ',' << departures;
      if (opt.config.trace == sim::TraceLevel::Full) {
        for (auto q : tr.queues) ts << ',' << q;
        for (auto d : tr.transmissions) ts << ',' << static_cast<int>(d);
        for (auto a : tr.arrivals) ts << ',' << a;
      }
      ts << '\n';
    };
  }
  const auto res = sim::run(cfg, observer);
  if (trajectory) trajectory->commit();

  const auto& v = res.verdict;
  std::string summary;
  if (opt.format == Format::Csv) {
    std::ostringstream out;
    out << header_line("simulate", cfg.seed, cfg_json.dump());
    out << "topology,n,lambda,variant,verdict,growth_rate,growth_std_error,final_total,max_queue,departures_total";
    for (int i = 1; i <= n; ++i) out << ",throughput_" << i;
    out << '\n';
    out << to_string(cfg.topology.kind()) << ',' << n << ',' << fnum(cfg.arrivals.lambda) << ','
        << sim::to_string(cfg.variant) << ',' << sim::to_string(v.classification) << ',' << fnum(v.growth_rate) << ','
        << fnum(v.growth_std_error) << ',' << v.final_total << ',' << res.max_queue << ',' << res.departures_total;
    for (double x : res.per_node_throughput) out << ',' << fnum(x);
    out << '\n';
    summary = out.str();
  } else {
    Json doc = tool_fields("simulate", cfg.seed);
    doc["config"] = cfg_json;
    doc["verdict"] = sim::to_string(v.classification);
    doc["growth_rate"] = v.growth_rate;
    doc["growth_std_error"] = v.growth_std_error;
    doc["reason"] = v.reason;
    doc["reference_capacity"] = to_decimal_string(sim::reference_capacity(cfg.topology, cfg.variant));
    doc["stability_gap"] = v.stability_gap;
    doc["queue_bound"] = v.queue_bound;
    doc["max_window_mean"] = v.max_window_mean;
    doc["initial_total"] = v.initial_total;
    doc["final_total"] = v.final_total;
    doc["max_queue"] = res.max_queue;
    doc["arrivals_total"] = res.arrivals_total;
    doc["forwarded_total"] = res.forwarded_total;
    doc["departures_total"] = res.departures_total;
    doc["per_node_throughput"] = res.per_node_throughput;
    doc["final_state"] = res.final_state.q;
    Json windows_json = Json::array();
    for (const auto& w : res.windows)
      windows_json.push_back(
          Json{{"first_slot", w.first_slot}, {"slots", w.slots}, {"mean_total", w.mean_total}, {"max_total", w.max_total}});
    doc["windows"] = std::move(windows_json);
    summary = doc.dump(2) + "\n";
  }
  if (opt.out.empty()) {
    emit("", os, summary);
  } else {
    write_atomic(opt.out + (opt.format == Format::Csv ? ".summary.csv" : ".summary.json"), summary);
    os << "verdict " << sim::to_string(v.classification) << ", growth rate " << fnum(v.growth_rate) << " packets/slot\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ sweeps

namespace {

std::string row_key(TopologyKind kind, int n, double lambda, const sim::Variant& variant, sim::ArrivalKind arrivals,
                    int replication) {
  return std::string(to_string(kind)) + "/n=" + std::to_string(n) + "/lambda=" + format_double(lambda) +
         "/variant=" + sim::to_string(variant) + "/arrivals=" + std::string(sim::to_string(arrivals)) +
         "/rep=" + std::to_string(replication);
}

sim::SimConfig sweep_config(const SweepOptions& opt, TopologyKind kind, int n, double lambda, std::uint64_t seed) {
  sim::SimConfig cfg;
  cfg.topology = Topology(kind, n);
  cfg.arrivals.kind = opt.arrivals;
  cfg.arrivals.lambda = lambda;
  cfg.variant = opt.variant;
  cfg.horizon = opt.horizon;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepOptions& opt) {
  if (opt.replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (opt.horizon < 1) throw std::invalid_argument("horizon must be at least one slot");
  std::vector<SweepRow> rows;
  for (auto kind : opt.kinds) {
    for (int n : opt.sizes) {
      for (double lambda : opt.lambdas) {
        SweepRow row;
        row.kind = kind;
        row.n = n;
        row.lambda = lambda;
        row.seed = row_seed(opt.seed, row_key(kind, n, lambda, opt.variant, opt.arrivals, 0));
        sweep_config(opt, kind, n, lambda, row.seed).validate();
        rows.push_back(row);
      }
    }
  }
  const std::size_t reps = static_cast<std::size_t>(opt.replications);
  const std::size_t jobs = rows.size() * reps;
  std::vector<sim::StabilityVerdict> verdicts(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const auto& row = rows[job / reps];
      const int rep = static_cast<int>(job % reps);
      try {
        const std::uint64_t seed =
            rep == 0 ? row.seed : row_seed(opt.seed, row_key(row.kind, row.n, row.lambda, opt.variant, opt.arrivals, rep));
        verdicts[job] = sim::run(sweep_config(opt, row.kind, row.n, row.lambda, seed)).verdict;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t threads = std::min<std::size_t>(jobs, opt.threads ? opt.threads : hw);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    double se_sq = 0.0;
    for (std::size_t k = 0; k < reps; ++k) {
      const auto& v = verdicts[r * reps + k];
      row.growth_rate += v.growth_rate;
      se_sq += v.growth_std_error * v.growth_std_error;
      if (v.classification == sim::Classification::StableEvidence) ++row.stable_runs;
      if (v.classification == sim::Classification::UnstableEvidence) ++row.unstable_runs;
    }
    row.growth_rate /= static_cast<double>(reps);
    row.growth_std_error = std::sqrt(se_sq) / static_cast<double>(reps);
    if (row.stable_runs == opt.replications) {
      row.verdict = sim::Classification::StableEvidence;
    } else if (row.unstable_runs == opt.replications) {
      row.verdict = sim::Classification::UnstableEvidence;
    } else {
      row.verdict = sim::Classification::Inconclusive;
    }
  }
  return rows;
}

std::string sweep_csv(const SweepOptions& opt, const std::vector<SweepRow>& rows) {
  Json cfg;
  Json kinds = Json::array();
  for (auto k : opt.kinds) kinds.push_back(to_string(k));
  cfg["topologies"] = std::move(kinds);
  cfg["n"] = opt.sizes;
  cfg["lambda"] = opt.lambdas;
  cfg["variant"] = sim::to_string(opt.variant);
  cfg["arrivals"] = sim::to_string(opt.arrivals);
  cfg["horizon"] = opt.horizon;
  cfg["replications"] = opt.replications;
  std::ostringstream out;
  out << header_line("sweep", opt.seed, cfg.dump());
  out << "topology,n,lambda,variant,verdict,growth_rate,growth_std_error,stable_runs,unstable_runs,replications,seed\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << r.n << ',' << fnum(r.lambda) << ',' << sim::to_string(opt.variant) << ','
        << sim::to_string(r.verdict) << ',' << fnum(r.growth_rate) << ',' << fnum(r.growth_std_error) << ','
        << r.stable_runs << ',' << r.unstable_runs << ',' << opt.replications << ',' << r.seed << '\n';
  }
  return out.str();
}

int cmd_sweep(const SweepOptions& opt, std::ostream& os) {
  const auto rows = run_sweep(opt);
  emit(opt.out, os, sweep_csv(opt, rows));
  return kExitOk;
}

// -------------------------------------------------------------- saturated

int cmd_saturated_throughput(const SaturatedOptions& opt, std::ostream& os) {
  if (opt.slots < 1) throw std::invalid_argument("need at least one slot");
  const auto est = sim::saturated_throughput(opt.topology, opt.slots, Rng(opt.seed));
  Json cfg;
  cfg["topology"] = to_string(opt.topology.kind());
  cfg["n"] = opt.topology.size();
  cfg["slots"] = opt.slots;
  if (opt.format == Format::Csv) {
    std::ostringstream out;
    out << header_line("saturated-throughput", opt.seed, cfg.dump());
    out << "node,throughput,std_error,samples\n";
    for (std::size_t i = 0; i < est.size(); ++i)
      out << i + 1 << ',' << fnum(est[i].mean) << ',' << fnum(est[i].std_error) << ',' << est[i].samples << '\n';
    emit(opt.out, os, out.str());
    return kExitOk;
  }
  Json doc = tool_fields("saturated-throughput", opt.seed);
  doc["config"] = cfg;
  Json nodes = Json::array();
  for (std::size_t i = 0; i < est.size(); ++i)
    nodes.push_back(Json{{"node", i + 1}, {"throughput", est[i].mean}, {"std_error", est[i].std_error}});
  doc["nodes"] = std::move(nodes);
  emit(opt.out, os, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace csma::lab
