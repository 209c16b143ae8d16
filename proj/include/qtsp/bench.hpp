#pragma once

// Metrics, result records, reference comparison and plot-data export.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtsp/error.hpp"
#include "qtsp/qubo.hpp"
#include "qtsp/samples.hpp"
#include "qtsp/tsp.hpp"
#include "qtsp/vqe.hpp"

namespace qtsp {

inline constexpr int kRecordSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Shot-weighted fraction of samples that decode to a valid tour.
inline double feasibility_ratio(const SampleSet& s, std::size_t n) {
  if (n < 2) throw InvalidArgument("city count must be >= 2");
  const std::size_t m = (n - 1) * (n - 1);
  if (s.width() != m) {
    throw SizeMismatch("samples have " + std::to_string(s.width()) + " bits, n=" + std::to_string(n) + " needs " +
                       std::to_string(m));
  }
  if (s.shots() == 0) throw InvalidArgument("empty sample set");
  std::uint64_t ok = 0;
  for (const auto& [bits, c] : s.counts()) {
    if (is_feasible(bits_from_string(bits), n)) ok += c;
  }
  return double(ok) / double(s.shots());
}

struct ApproxMetrics {
  double delta_c = 0.0;
  double approx_ratio = 0.0;
  bool clamped = false; // raw ratio fell outside [0, 1]
};

inline ApproxMetrics approx_metrics(double best_energy, double c_min, double c_max) {
  if (!(c_max > c_min)) throw InvalidArgument("approximation ratio needs C_max > C_min");
  ApproxMetrics m;
  m.delta_c = best_energy - c_min;
  m.approx_ratio = m.delta_c / (c_max - c_min);
  if (m.approx_ratio < 0.0) {
    m.delta_c = 0.0;
    m.approx_ratio = 0.0;
    m.clamped = true;
  } else if (m.approx_ratio > 1.0) {
    m.approx_ratio = 1.0;
    m.clamped = true;
  }
  return m;
}

/// Lowest tour cost among feasible samples, if any.
inline std::optional<double> best_feasible_cost(const SampleSet& s, const TspInstance& inst) {
  std::optional<double> best;
  for (const auto& [bits, c] : s.counts()) {
    const auto d = decode(bits_from_string(bits), inst.n());
    if (!d.feasible()) continue;
    const double cost = tour_cost(inst, *d.tour);
    if (!best || cost < *best) best = cost;
  }
  return best;
}

/// One-sided sign test: P(X >= wins) for X ~ Binomial(trials, 1/2). Ties are
/// dropped by the caller.
inline double sign_test_p(std::uint64_t wins, std::uint64_t trials) {
  if (wins > trials) throw InvalidArgument("wins exceed trials");
  double p = 0.0;
  for (std::uint64_t k = wins; k <= trials; ++k) {
    p += std::exp(std::lgamma(double(trials) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(trials - k) + 1) -
                  double(trials) * std::log(2.0));
  }
  return std::min(p, 1.0);
}

struct NoiseSweep {
  std::vector<std::string> presets;
  std::vector<std::vector<double>> feasibility; // [preset][repeat]

  double mean(std::size_t preset) const {
    double s = 0.0;
    for (double f : feasibility[preset]) s += f;
    return s / double(feasibility[preset].size());
  }
};

/// Feasibility of `shots` samples at fixed parameters under each preset, the
/// circuit translated to the preset's native basis. Repeat k uses the same
/// RNG stream for every preset, so results are paired.
inline NoiseSweep sweep_noise(const CircuitSpec& ansatz, std::span<const double> params, std::size_t n,
                              const std::vector<std::string>& presets, std::uint64_t repeats, std::uint64_t shots,
                              std::uint64_t seed) {
  if (repeats < 1 || shots < 1) throw InvalidArgument("repeats and shots must be >= 1");
  NoiseSweep out;
  out.presets = presets;
  for (const auto& name : presets) {
    const auto noise = noise_preset(name);
    const auto circuit = translate_to_basis(ansatz, preset_basis(name)).circuit;
    std::vector<double> f;
    for (std::uint64_t k = 0; k < repeats; ++k) {
      f.push_back(feasibility_ratio(execute_noisy(circuit, params, noise, shots, stream_seed(seed, k + 1)), n));
    }
    out.feasibility.push_back(std::move(f));
  }
  return out;
}

/// Paired one-sided sign test that preset a beats preset b; ties dropped.
struct SignTestResult {
  std::uint64_t wins = 0, losses = 0, ties = 0;
  double p_value = 1.0;
};

inline SignTestResult paired_sign_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw SizeMismatch("paired samples differ in length");
  SignTestResult r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) ++r.wins;
    else if (a[i] < b[i]) ++r.losses;
    else ++r.ties;
  }
  r.p_value = sign_test_p(r.wins, r.wins + r.losses);
  return r;
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct InstanceDescriptor {
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  double scale = 1.0;

  friend bool operator==(const InstanceDescriptor&, const InstanceDescriptor&) = default;
};

struct BenchmarkRecord {
  std::string backend; // e.g. "vqe/fez", "anneal/sa", "rydberg/triangular", "embedding/advantage2"
  InstanceDescriptor instance;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;

  // metrics section: deterministic for a fixed config and seed
  std::vector<double> trace;
  std::optional<double> best_energy;
  std::optional<double> feasibility_ratio;
  std::optional<double> approx_ratio;
  std::optional<double> delta_c;
  bool approx_clamped = false;
  nlohmann::json extra_metrics = nlohmann::json::object();

  double wall_seconds = 0.0;
  std::string timestamp;
  nlohmann::json unknown = nlohmann::json::object(); // fields from newer writers

  void validate() const {
    auto in_unit = [](const std::optional<double>& v) { return !v || (*v >= 0.0 && *v <= 1.0); };
    if (!in_unit(feasibility_ratio)) throw InvalidArgument("feasibility_ratio outside [0, 1]");
    if (!in_unit(approx_ratio)) throw InvalidArgument("approx_ratio outside [0, 1]");
    if (delta_c && *delta_c < 0.0) throw InvalidArgument("delta_c must be >= 0");
    if (delta_c.has_value() != approx_ratio.has_value()) throw InvalidArgument("delta_c and approx_ratio come together");
    if (delta_c && ((*delta_c == 0.0) != (*approx_ratio == 0.0))) {
      throw InvalidArgument("delta_c = 0 must coincide with approx_ratio = 0");
    }
  }

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

namespace detail {

inline nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> json_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

} // namespace detail

/// The deterministic part of a record: no timings or timestamps.
inline nlohmann::json metrics_json(const BenchmarkRecord& r) {
  nlohmann::json m = r.extra_metrics;
  m["trace"] = r.trace;
  m["best_energy"] = detail::optional_json(r.best_energy);
  m["feasibility_ratio"] = detail::optional_json(r.feasibility_ratio);
  m["approx_ratio"] = detail::optional_json(r.approx_ratio);
  m["delta_c"] = detail::optional_json(r.delta_c);
  m["approx_clamped"] = r.approx_clamped;
  return m;
}

inline nlohmann::json to_json(const BenchmarkRecord& r) {
  nlohmann::json j = r.unknown;
  j["schema_version"] = kRecordSchemaVersion;
  j["backend"] = r.backend;
  j["instance"] = {{"n", r.instance.n},
                   {"seed", r.instance.seed ? nlohmann::json(*r.instance.seed) : nlohmann::json(nullptr)},
                   {"scale", r.instance.scale}};
  j["config"] = r.config;
  j["seeds"] = r.seeds;
  j["metrics"] = metrics_json(r);
  j["wall_seconds"] = r.wall_seconds;
  j["timestamp"] = r.timestamp;
  return j;
}

inline BenchmarkRecord record_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InvalidArgument("record must be a JSON object");
    const int version = j.at("schema_version").get<int>();
    if (version < 1 || version > kRecordSchemaVersion) {
      throw InvalidArgument("unsupported record schema_version " + std::to_string(version));
    }
    BenchmarkRecord r;
    r.backend = j.at("backend").get<std::string>();
    const auto& inst = j.at("instance");
    r.instance.n = inst.at("n").get<std::size_t>();
    if (inst.contains("seed") && !inst.at("seed").is_null()) r.instance.seed = inst.at("seed").get<std::uint64_t>();
    r.instance.scale = inst.value("scale", 1.0);
    r.config = j.value("config", nlohmann::json::object());
    r.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    nlohmann::json m = j.at("metrics");
    r.trace = m.value("trace", std::vector<double>{});
    r.best_energy = detail::json_optional(m, "best_energy");
    r.feasibility_ratio = detail::json_optional(m, "feasibility_ratio");
    r.approx_ratio = detail::json_optional(m, "approx_ratio");
    r.delta_c = detail::json_optional(m, "delta_c");
    r.approx_clamped = m.value("approx_clamped", false);
    for (const char* k : {"trace", "best_energy", "feasibility_ratio", "approx_ratio", "delta_c", "approx_clamped"}) {
      m.erase(k);
    }
    r.extra_metrics = std::move(m);
    r.wall_seconds = j.value("wall_seconds", 0.0);
    r.timestamp = j.value("timestamp", std::string{});
    for (const auto& [k, v] : j.items()) {
      static const char* known[] = {"schema_version", "backend", "instance", "config", "seeds",
                                    "metrics",        "wall_seconds", "timestamp"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) == std::end(known)) {
        r.unknown[k] = v;
      }
    }
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed record: ") + e.what());
  }
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Fills the TSP solution metrics from final samples against the exhaustive
/// optimum. Approximation metrics are left empty when no sample is feasible.
inline void fill_solution_metrics(BenchmarkRecord& r, const TspInstance& inst, const SampleSet& final_samples) {
  r.instance.n = inst.n();
  r.feasibility_ratio = feasibility_ratio(final_samples, inst.n());
  const auto opt = brute_force_optimum(inst);
  r.extra_metrics["optimal_cost"] = opt.min_cost;
  r.extra_metrics["worst_cost"] = opt.max_cost;
  r.extra_metrics["mode"] = final_samples.mode();
  const auto best = best_feasible_cost(final_samples, inst);
  r.extra_metrics["best_tour_cost"] = best ? nlohmann::json(*best) : nlohmann::json(nullptr);
  if (best && opt.max_cost > opt.min_cost) {
    const auto a = approx_metrics(*best, opt.min_cost, opt.max_cost);
    r.delta_c = a.delta_c;
    r.approx_ratio = a.approx_ratio;
    r.approx_clamped = a.clamped;
  }
}

// ---------------------------------------------------------------------------
// Persistence (append-only JSON lines)
// ---------------------------------------------------------------------------

/// Single writer per file; appends are serialized and flushed line by line.
class JsonlWriter {
public:
  explicit JsonlWriter(std::string path) : path_(std::move(path)) {}

  void append(const BenchmarkRecord& r) {
    r.validate();
    const std::string line = to_json(r).dump() + "\n";
    std::lock_guard lock(mu_);
    std::ofstream os(path_, std::ios::app | std::ios::binary);
    if (!os) throw BackendFailure("cannot open '" + path_ + "' for appending");
    os << line;
    os.flush();
    if (!os) throw BackendFailure("write to '" + path_ + "' failed");
  }

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
  std::mutex mu_;
};

inline void persist(const std::string& path, const BenchmarkRecord& r) { JsonlWriter(path).append(r); }

struct LoadResult {
  std::vector<BenchmarkRecord> records;
  std::vector<std::string> warnings; // one per skipped line
};

inline LoadResult load_all(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open '" + path + "'");
  LoadResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      out.warnings.push_back(path + ":" + std::to_string(lineno) + ": skipped: " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference comparison
// ---------------------------------------------------------------------------

struct ReferenceRow {
  std::string device; // noise preset name
  std::string label;  // device name as published
  double best_energy = 0.0;
  double feasibility_percent = 0.0;
};

struct ReferenceTable {
  std::size_t n = 4;
  std::uint64_t shots = 200;
  std::vector<ReferenceRow> rows;

  const ReferenceRow* find(const std::string& device) const {
    for (const auto& r : rows)
      if (r.device == device) return &r;
    return nullptr;
  }
};

inline ReferenceTable reference_table_from_json(const nlohmann::json& j) {
  try {
    ReferenceTable t;
    t.n = j.at("n").get<std::size_t>();
    t.shots = j.at("shots").get<std::uint64_t>();
    for (const auto& r : j.at("rows")) {
      t.rows.push_back({r.at("device").get<std::string>(), r.at("label").get<std::string>(),
                        r.at("best_energy").get<double>(), r.at("feasibility_percent").get<double>()});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed reference table: ") + e.what());
  }
}

inline ReferenceTable load_reference_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open reference table '" + path + "'");
  try {
    return reference_table_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("reference table '" + path + "': " + e.what());
  }
}

struct ComparisonRow {
  std::string backend;
  std::string device; // empty if no reference row matches
  double sim_feasibility = 0.0;
  std::optional<double> sim_best_energy;
  std::optional<double> ref_feasibility; // fraction
  std::optional<double> ref_best_energy;
};

enum class Ordering { Consistent, Inconsistent, Tie };

inline std::string_view ordering_name(Ordering o) {
  switch (o) {
  case Ordering::Consistent: return "consistent";
  case Ordering::Inconsistent: return "inconsistent";
  case Ordering::Tie: return "tie";
  }
  return "?";
}

struct OrderingFlag {
  std::size_t a = 0, b = 0; // row indices
  double sim_delta = 0.0;   // feasibility a - b
  std::optional<double> ref_delta;
  std::optional<Ordering> ordering; // empty when either side has no reference
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<OrderingFlag> pairs;
  std::vector<std::string> notes;
};

/// Device label of a record: config "noise" if present, else the part of
/// the backend label after '/'.
inline std::string record_device(const BenchmarkRecord& r) {
  if (r.config.contains("noise") && r.config.at("noise").is_string()) return r.config.at("noise").get<std::string>();
  const auto slash = r.backend.find('/');
  return slash == std::string::npos ? r.backend : r.backend.substr(slash + 1);
}

/// Side-by-side rows and pairwise feasibility ordering against the table.
/// Only directions are compared; the published values are not targets.
inline ComparisonReport compare_to_reference(const std::vector<BenchmarkRecord>& records, const ReferenceTable& t) {
  ComparisonReport rep;
  for (const auto& r : records) {
    if (r.instance.n != t.n) {
      throw InvalidArgument("record '" + r.backend + "' is an n=" + std::to_string(r.instance.n) +
                            " run; the reference protocol is n=" + std::to_string(t.n));
    }
    const auto shots = r.config.value("shots", std::uint64_t{0});
    if (shots != t.shots) {
      throw InvalidArgument("record '" + r.backend + "' used " + std::to_string(shots) +
                            " shots; the reference protocol uses " + std::to_string(t.shots));
    }
    if (!r.feasibility_ratio) throw InvalidArgument("record '" + r.backend + "' has no feasibility ratio");
    ComparisonRow row;
    row.backend = r.backend;
    row.sim_feasibility = *r.feasibility_ratio;
    row.sim_best_energy = r.best_energy;
    const auto device = record_device(r);
    if (const auto* ref = t.find(device)) {
      row.device = device;
      row.ref_feasibility = ref->feasibility_percent / 100.0;
      row.ref_best_energy = ref->best_energy;
    }
    rep.rows.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < rep.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.rows.size(); ++b) {
      OrderingFlag f;
      f.a = a;
      f.b = b;
      f.sim_delta = rep.rows[a].sim_feasibility - rep.rows[b].sim_feasibility;
      if (rep.rows[a].ref_feasibility && rep.rows[b].ref_feasibility) {
        f.ref_delta = *rep.rows[a].ref_feasibility - *rep.rows[b].ref_feasibility;
        if (f.sim_delta == 0.0 || *f.ref_delta == 0.0) f.ordering = Ordering::Tie;
        else f.ordering = (f.sim_delta > 0.0) == (*f.ref_delta > 0.0) ? Ordering::Consistent : Ordering::Inconsistent;
      }
      rep.pairs.push_back(f);
    }
  }
  rep.notes.push_back("published values come from physical devices; only orderings are compared");
  return rep;
}

inline std::string format_percent(double fraction) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << 100.0 * fraction;
  return os.str();
}

inline std::string render_report(const ComparisonReport& rep) {
  std::ostringstream os;
  os << "backend\tdevice\tsim_feasibility_%\tref_feasibility_%\tsim_best_energy\tref_best_energy\n";
  for (const auto& r : rep.rows) {
    os << r.backend << '\t' << (r.device.empty() ? "-" : r.device) << '\t' << format_percent(r.sim_feasibility) << '\t'
       << (r.ref_feasibility ? format_percent(*r.ref_feasibility) : "-") << '\t';
    if (r.sim_best_energy) os << *r.sim_best_energy;
    else os << '-';
    os << '\t';
    if (r.ref_best_energy) os << *r.ref_best_energy;
    else os << '-';
    os << '\n';
  }
  for (const auto& p : rep.pairs) {
    os << rep.rows[p.a].backend << " vs " << rep.rows[p.b].backend << ": sim delta " << format_percent(p.sim_delta)
       << " pts";
    if (p.ordering) os << ", " << ordering_name(*p.ordering);
    os << '\n';
  }
  for (const auto& n : rep.notes) os << "note: " << n << '\n';
  return os.str();
}

/// Per-evaluation mean and best over runs of one backend, truncated to the
/// shortest trace.
struct TraceAggregate {
  std::vector<double> mean;
  std::vector<double> best;
};

inline TraceAggregate aggregate_traces(const std::vector<const BenchmarkRecord*>& runs) {
  TraceAggregate agg;
  if (runs.empty()) return agg;
  std::size_t len = runs[0]->trace.size();
  for (const auto* r : runs) len = std::min(len, r->trace.size());
  agg.mean.assign(len, 0.0);
  agg.best.assign(len, std::numeric_limits<double>::infinity());
  for (const auto* r : runs) {
    for (std::size_t i = 0; i < len; ++i) {
      agg.mean[i] += r->trace[i] / double(runs.size());
      agg.best[i] = std::min(agg.best[i], r->trace[i]);
    }
  }
  return agg;
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

enum class PlotKind { Trace, FeasibilityBars, EmbeddingCurve, AnnealGap };

inline PlotKind plot_kind_from_name(std::string_view s) {
  if (s == "trace") return PlotKind::Trace;
  if (s == "feasibility-bars") return PlotKind::FeasibilityBars;
  if (s == "embedding-curve") return PlotKind::EmbeddingCurve;
  if (s == "anneal-gap") return PlotKind::AnnealGap;
  throw InvalidArgument("unknown plot kind '" + std::string(s) +
                        "' (trace, feasibility-bars, embedding-curve, anneal-gap)");
}

namespace detail {

inline std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string seed_of(const BenchmarkRecord& r) { return r.seeds.empty() ? "" : std::to_string(r.seeds[0]); }

} // namespace detail

/// Tidy CSV, one row per plotted point.
inline std::string emit_plot_data(const std::vector<BenchmarkRecord>& records, PlotKind kind) {
  std::ostringstream os;
  switch (kind) {
  case PlotKind::Trace:
    os << "record,backend,seed,evaluation,energy\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (r.trace.empty()) throw InvalidArgument("record " + std::to_string(i) + " (" + r.backend + ") has no trace");
      for (std::size_t k = 0; k < r.trace.size(); ++k) {
        os << i << ',' << r.backend << ',' << detail::seed_of(r) << ',' << k << ',' << detail::csv_number(r.trace[k])
           << '\n';
      }
    }
    break;
  case PlotKind::FeasibilityBars:
    os << "record,backend,n,seed,feasibility_ratio\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (!r.feasibility_ratio) throw InvalidArgument("record " + std::to_string(i) + " has no feasibility ratio");
      os << i << ',' << r.backend << ',' << r.instance.n << ',' << detail::seed_of(r) << ','
         << detail::csv_number(*r.feasibility_ratio) << '\n';
    }
    break;
  case PlotKind::EmbeddingCurve:
    os << "record,topology,n,logical_vars,chain_length,physical_qubits,coupler_usage,fits\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (!r.extra_metrics.contains("embedding")) {
        throw InvalidArgument("record " + std::to_string(i) + " has no embedding curve");
      }
      for (const auto& row : r.extra_metrics.at("embedding")) {
        os << i << ',' << record_device(r) << ',' << row.at("n").get<std::uint64_t>() << ','
           << row.at("logical_vars").get<std::uint64_t>() << ',' << row.at("chain_length").get<std::uint64_t>() << ','
           << row.at("physical_qubits").get<std::uint64_t>() << ',' << row.at("coupler_usage").get<std::uint64_t>()
           << ',' << (row.at("fits").get<bool>() ? "true" : "false") << '\n';
      }
    }
    break;
  case PlotKind::AnnealGap:
    os << "record,n,reads,seed,best_cost,optimal_cost,gap\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      const auto& m = r.extra_metrics;
      if (!m.contains("optimal_cost") || !r.config.contains("num_reads")) {
        throw InvalidArgument("record " + std::to_string(i) + " is not an annealing run");
      }
      const double opt = m.at("optimal_cost").get<double>();
      os << i << ',' << r.instance.n << ',' << r.config.at("num_reads").get<std::uint64_t>() << ','
         << detail::seed_of(r) << ',';
      if (m.contains("best_tour_cost") && !m.at("best_tour_cost").is_null()) {
        const double best = m.at("best_tour_cost").get<double>();
        os << detail::csv_number(best) << ',' << detail::csv_number(opt) << ',' << detail::csv_number(best - opt);
      } else {
        os << ',' << detail::csv_number(opt) << ','; // no feasible read
      }
      os << '\n';
    }
    break;
  }
  return os.str();
}

} // namespace qtsp
