// qtsp: command-line harness over the TSP benchmarking library.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <toml.hpp>

#include "qtsp/qtsp.hpp"

#ifndef QTSP_DATA_DIR
#define QTSP_DATA_DIR "data"
#endif

namespace {

using namespace qtsp;
using clock_type = std::chrono::steady_clock;

constexpr int kExitInvalid = 2;
constexpr int kExitBackend = 3;

// ---------------------------------------------------------------------------
// Config file: an [experiment] table whose keys are option names with
// underscores or dashes. Flags given on the command line win.
// ---------------------------------------------------------------------------

class ConfigOverlay {
public:
  void load(const std::string& path) {
    toml::table root;
    try {
      root = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << "config '" << path << "': " << e.description() << " at " << e.source().begin;
      throw InvalidArgument(os.str());
    }
    for (const auto& [k, v] : root) {
      if (k.str() != "experiment") throw InvalidArgument("config: unknown top-level key '" + std::string(k.str()) + "'");
    }
    const auto* exp = root["experiment"].as_table();
    if (!exp) throw InvalidArgument("config '" + path + "' has no [experiment] table");
    for (const auto& [k, v] : *exp) {
      if (v.is_table() || v.is_array()) throw InvalidArgument("config: key '" + std::string(k.str()) + "' must be a scalar");
      std::string key(k.str());
      std::replace(key.begin(), key.end(), '-', '_');
      entries_.insert(key);
    }
    table_ = *exp;
  }

  bool has(CLI::Option* opt) const { return entries_.count(key_of(opt)) > 0; }

  /// Copies the config value into `target` unless the flag was given.
  template <class T>
  void apply(CLI::Option* opt, T& target) {
    const std::string key = key_of(opt);
    if (!entries_.count(key)) return;
    used_.insert(key);
    if (opt->count() > 0) return;
    const toml::node* node = table_.get(key);
    if (!node) {
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      node = table_.get(dashed);
    }
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
      if (auto v = node->value<bool>()) return void(target = *v);
    } else if constexpr (std::is_integral_v<T>) {
      if (auto v = node->value<std::int64_t>(); v && *v >= 0) return void(target = static_cast<T>(*v));
    } else if constexpr (std::is_floating_point_v<T>) {
      if (auto v = node->value<double>()) return void(target = *v);
    } else {
      if (auto v = node->value<std::string>()) return void(target = *v);
    }
    throw InvalidArgument("config: key '" + key + "' has the wrong type");
  }

  template <class T>
  void apply(CLI::Option* opt, std::optional<T>& target) {
    T tmp = target.value_or(T{});
    const bool present = opt->count() > 0 || has(opt);
    apply(opt, tmp);
    if (present) target = tmp;
  }

  void check_all_used() const {
    for (const auto& k : entries_) {
      if (!used_.count(k)) throw InvalidArgument("config: unknown key '" + k + "' for this command");
    }
  }

private:
  static std::string key_of(CLI::Option* opt) {
    std::string key = opt->get_name(false, true);
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
  }

  toml::table table_;
  std::set<std::string> entries_;
  std::set<std::string> used_;
};

struct Global {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool quiet = false;
};

std::string default_out_path() {
  const char* dir = std::getenv("QTSP_OUT_DIR");
  const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".");
  return (base / "qtsp_results.jsonl").string();
}

std::string out_path(const Global& g) { return g.out.empty() ? default_out_path() : g.out; }

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write '" + path + "'");
  os << text;
}

void persist_record(const Global& g, BenchmarkRecord& r, clock_type::time_point t0) {
  r.wall_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  r.timestamp = utc_timestamp();
  const auto path = out_path(g);
  ensure_parent(path);
  persist(path, r);
}

TspInstance make_instance(std::size_t n, std::uint64_t seed, double scale) { return generate_instance(n, seed, scale); }

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream os;
  os << *v;
  return os.str();
}

void print_summary(const Global& g, const BenchmarkRecord& r) {
  if (g.quiet) return;
  std::cout << r.backend << " n=" << r.instance.n << " seed=" << (r.seeds.empty() ? 0 : r.seeds[0])
            << " best_energy=" << fmt_opt(r.best_energy) << " feasibility=" << fmt_opt(r.feasibility_ratio)
            << " approx_ratio=" << fmt_opt(r.approx_ratio) << " delta_c=" << fmt_opt(r.delta_c) << '\n';
  if (r.extra_metrics.contains("mode")) std::cout << "mode " << r.extra_metrics["mode"].get<std::string>() << '\n';
}

std::size_t parse_count(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("bad ") + what + " '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct EncodeOpts {
  std::size_t n = 4;
  std::optional<std::uint64_t> instance_seed;
  double scale = 1.0;
  std::string penalty = "default";
  std::string form = "qubo";
  std::string instance_out, qubo_out;
};

double resolve_penalty(const std::string& spec, const TspInstance& inst) {
  if (spec == "default") return default_penalty(inst);
  if (spec == "tight") return tight_penalty(inst);
  try {
    std::size_t pos = 0;
    const double v = std::stod(spec, &pos);
    if (pos == spec.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("penalty must be 'default', 'tight' or a positive number, got '" + spec + "'");
}

nlohmann::json ising_json(const IsingProblem& p) {
  nlohmann::json quad = nlohmann::json::array();
  p.coupling.for_each_nonzero([&](std::size_t a, std::size_t b, double v) { quad.push_back({a, b, v}); });
  return {{"m", p.size()}, {"offset", p.offset}, {"h", p.h}, {"J", quad}};
}

int run_encode(const Global& g, const EncodeOpts& o) {
  const auto inst = make_instance(o.n, o.instance_seed.value_or(g.seed), o.scale);
  const auto q = encode_tsp(inst, resolve_penalty(o.penalty, inst));
  nlohmann::json problem;
  if (o.form == "qubo") problem = to_json(q);
  else if (o.form == "ising") problem = ising_json(qubo_to_ising(q));
  else throw InvalidArgument("form must be qubo or ising");
  if (!o.instance_out.empty()) write_text(o.instance_out, to_json(inst).dump(2) + "\n");
  if (!o.qubo_out.empty()) write_text(o.qubo_out, problem.dump(2) + "\n");
  if (o.qubo_out.empty() && !g.quiet) std::cout << problem.dump(2) << '\n';
  return 0;
}

struct VqeOpts {
  std::size_t n = 4;
  std::optional<std::uint64_t> instance_seed;
  double scale = 1.0;
  std::uint64_t shots = 200;
  std::string noise = "none";
  int layers = 1;
  int sweeps = 6;
  std::string basis; // empty: the preset's native basis
  bool exact = false;
};

int run_solve_vqe(const Global& g, const VqeOpts& o) {
  const auto t0 = clock_type::now();
  const std::uint64_t iseed = o.instance_seed.value_or(g.seed);
  const auto inst = make_instance(o.n, iseed, o.scale);
  const auto q = encode_tsp(inst, default_penalty(inst));
  if (o.layers < 1) throw InvalidArgument("layers must be >= 1");
  if (o.sweeps < 1) throw InvalidArgument("sweeps must be >= 1");
  VqeConfig cfg;
  cfg.shots = o.shots;
  cfg.noise = noise_preset(o.noise);
  cfg.seed = g.seed;
  cfg.sweeps = o.sweeps;
  cfg.basis = o.basis.empty() ? preset_basis(o.noise) : basis_from_name(o.basis);
  cfg.exact_cost = o.exact;
  if (o.shots < 1) throw InvalidArgument("shots must be >= 1");
  const auto res = run_vqe(q, build_ry_cz_ansatz(static_cast<int>(q.size()), o.layers), cfg);

  BenchmarkRecord r;
  r.backend = "vqe/" + o.noise;
  r.instance = {o.n, iseed, o.scale};
  r.config = {{"shots", o.shots},   {"noise", o.noise},   {"layers", o.layers},      {"sweeps", o.sweeps},
              {"basis", std::string(basis_name(cfg.basis))}, {"exact_cost", o.exact}, {"penalty", q.penalty}};
  r.seeds = {g.seed};
  for (const auto& e : res.trace.entries) r.trace.push_back(e.energy);
  r.best_energy = res.best_energy;
  fill_solution_metrics(r, inst, res.final_samples);
  r.extra_metrics["best_params"] = res.best_params;
  r.extra_metrics["gates"] = {{"one_qubit", res.gates.one_qubit},
                              {"two_qubit", res.gates.two_qubit},
                              {"depth", res.gates.depth},
                              {"two_qubit_depth", res.gates.two_qubit_depth}};
  persist_record(g, r, t0);
  print_summary(g, r);
  return 0;
}

struct AnnealOpts {
  std::size_t n = 5;
  std::optional<std::uint64_t> instance_seed;
  double scale = 1.0;
  std::uint64_t reads = 100;
  std::uint64_t sweeps = 500;
  double beta_start = 0.1, beta_end = 10.0;
  std::string penalty = "tight";
};

int run_solve_anneal(const Global& g, const AnnealOpts& o) {
  const auto t0 = clock_type::now();
  const std::uint64_t iseed = o.instance_seed.value_or(g.seed);
  const auto inst = make_instance(o.n, iseed, o.scale);
  const auto q = encode_tsp(inst, resolve_penalty(o.penalty, inst));
  const auto ising = qubo_to_ising(q);
  AnnealParams ap;
  ap.num_reads = o.reads;
  ap.sweeps = o.sweeps;
  ap.beta_start = o.beta_start;
  ap.beta_end = o.beta_end;
  ap.seed = g.seed;
  ap.validate();
  const auto reads = sa_reads(ising, ap);
  SampleSet s(q.size());
  for (const auto& b : reads) s.add(b);
  const auto best = best_read(ising, reads);

  BenchmarkRecord r;
  r.backend = "anneal/sa";
  r.instance = {o.n, iseed, o.scale};
  r.config = {{"num_reads", o.reads},     {"sweeps", o.sweeps},  {"beta_start", o.beta_start},
              {"beta_end", o.beta_end},   {"penalty", q.penalty}};
  r.seeds = {g.seed};
  r.best_energy = qubo_energy(q, best);
  fill_solution_metrics(r, inst, s);
  r.extra_metrics["best_read"] = to_string(best);
  persist_record(g, r, t0);
  print_summary(g, r);
  return 0;
}

struct RydbergOpts {
  std::size_t n = 3;
  std::optional<std::uint64_t> instance_seed;
  double scale = 1.0;
  std::uint64_t budget = 60;
  std::uint64_t shots = 500;
  std::string lattice = "triangular";
  double duration_ns = 4000.0;
  bool random_search = false;
  std::string register_out, pulse_out;
};

int run_solve_rydberg(const Global& g, const RydbergOpts& o) {
  const auto t0 = clock_type::now();
  const std::uint64_t iseed = o.instance_seed.value_or(g.seed);
  const auto inst = make_instance(o.n, iseed, o.scale);
  const auto q = encode_tsp(inst, default_penalty(inst));
  RydbergParams p;
  PlacementOptions po;
  po.lattice = lattice_from_name(o.lattice);
  const auto placed = place_atoms(q, po, p, g.seed);
  VqaaOptions vo;
  vo.budget = o.budget;
  vo.shots = o.shots;
  vo.seed = g.seed;
  vo.duration_ns = o.duration_ns;
  vo.random_search = o.random_search;
  const auto res = vqaa_optimize(q, placed.reg, p, vo);

  BenchmarkRecord r;
  r.backend = "rydberg/" + o.lattice;
  r.instance = {o.n, iseed, o.scale};
  r.config = {{"budget", o.budget},         {"shots", o.shots},           {"lattice", o.lattice},
              {"duration_ns", o.duration_ns}, {"random_search", o.random_search}};
  r.seeds = {g.seed};
  for (const auto& e : res.trace) r.trace.push_back(e.cost);
  r.best_energy = res.best_cost;
  fill_solution_metrics(r, inst, res.samples);
  r.extra_metrics["register"] = to_json(placed.reg);
  r.extra_metrics["pulse"] = to_json(res.best);
  r.extra_metrics["placement_objective"] = placed.fit.objective;
  if (!o.register_out.empty()) write_text(o.register_out, to_json(placed.reg).dump(2) + "\n");
  if (!o.pulse_out.empty()) write_text(o.pulse_out, to_json(res.best).dump(2) + "\n");
  persist_record(g, r, t0);
  print_summary(g, r);
  return 0;
}

struct EmbedOpts {
  std::string n_range = "3:15";
  std::string topology = "advantage2";
  std::uint64_t shore = 4;
  double inflation = 1.0;
  std::string csv;
  std::size_t calibrate_cap = 0;
};

int run_embed(const Global& g, const EmbedOpts& o) {
  const auto t0 = clock_type::now();
  const auto parts = split(o.n_range, ':');
  if (parts.size() != 2) throw InvalidArgument("n-range must look like LO:HI");
  const auto lo = parse_count(parts[0], "n-range"), hi = parse_count(parts[1], "n-range");
  auto topo = topology_preset(o.topology);
  topo.shore = o.shore;
  topo.inflation = o.inflation;
  BenchmarkRecord r;
  if (o.calibrate_cap > 0) {
    const auto w = calibrate_inflation(o.calibrate_cap, topo);
    topo.inflation = w.chosen;
    r.extra_metrics["calibration"] = {{"cap", o.calibrate_cap}, {"lo", w.lo}, {"hi", w.hi}, {"chosen", w.chosen}};
  }
  const auto rows = tsp_embedding_curve(lo, hi, topo);
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& row : rows) {
    auto j = to_json(row.est);
    j["n"] = row.n;
    jrows.push_back(j);
  }
  r.backend = "embedding/" + o.topology;
  r.instance = {0, std::nullopt, 1.0};
  r.config = {{"n_range", o.n_range}, {"topology", to_json(topo)}};
  r.seeds = {g.seed};
  r.extra_metrics["embedding"] = jrows;
  r.extra_metrics["largest_fitting_n"] = largest_fitting(rows);
  const auto csv = embedding_csv(rows);
  if (!o.csv.empty()) write_text(o.csv, csv);
  else if (!g.quiet) std::cout << csv;
  persist_record(g, r, t0);
  if (!g.quiet) {
    std::cout << "largest fitting n: " << largest_fitting(rows) << " (inflation " << topo.inflation << ")\n";
  }
  return 0;
}

struct SweepOpts {
  std::size_t n = 4;
  std::optional<std::uint64_t> instance_seed;
  double scale = 1.0;
  std::string presets = "none,fez,brisbane,garnet,marmot";
  std::uint64_t repeats = 20;
  std::uint64_t shots = 200;
  int layers = 1;
  int sweeps = 6;
};

int run_sweep(const Global& g, const SweepOpts& o) {
  const auto t0 = clock_type::now();
  const std::uint64_t iseed = o.instance_seed.value_or(g.seed);
  const auto inst = make_instance(o.n, iseed, o.scale);
  const auto q = encode_tsp(inst, default_penalty(inst));
  const auto ansatz = build_ry_cz_ansatz(static_cast<int>(q.size()), o.layers);
  VqeConfig cfg;
  cfg.shots = o.shots;
  cfg.seed = g.seed;
  cfg.sweeps = o.sweeps;
  const auto opt = run_vqe(q, ansatz, cfg);
  const auto presets = split(o.presets, ',');
  if (presets.empty()) throw InvalidArgument("no presets given");
  const auto sw = sweep_noise(ansatz, opt.best_params, o.n, presets, o.repeats, o.shots, g.seed);

  for (std::size_t i = 0; i < presets.size(); ++i) {
    BenchmarkRecord r;
    r.backend = "sweep/" + presets[i];
    r.instance = {o.n, iseed, o.scale};
    r.config = {{"shots", o.shots},
                {"noise", presets[i]},
                {"repeats", o.repeats},
                {"layers", o.layers},
                {"sweeps", o.sweeps},
                {"basis", std::string(basis_name(preset_basis(presets[i])))}};
    r.seeds = {g.seed};
    r.best_energy = opt.best_energy;
    r.feasibility_ratio = sw.mean(i);
    r.extra_metrics["feasibility_per_repeat"] = sw.feasibility[i];
    r.extra_metrics["parameters"] = opt.best_params;
    persist_record(g, r, t0);
    if (!g.quiet) std::cout << presets[i] << " mean feasibility " << format_percent(sw.mean(i)) << "%\n";
  }
  if (!g.quiet) {
    for (std::size_t a = 0; a < presets.size(); ++a) {
      for (std::size_t b = 0; b < presets.size(); ++b) {
        if (a == b) continue;
        const auto st = paired_sign_test(sw.feasibility[a], sw.feasibility[b]);
        if (st.p_value < 0.05) {
          std::cout << presets[a] << " > " << presets[b] << " (sign test " << st.wins << "/" << st.wins + st.losses
                    << ", p=" << st.p_value << ")\n";
        }
      }
    }
  }
  return 0;
}

struct ReportOpts {
  std::string in;
  std::string reference = std::string(QTSP_DATA_DIR) + "/reference_table.json";
};

LoadResult load_records(const std::string& path, bool quiet) {
  auto loaded = load_all(path);
  if (!quiet) {
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  }
  return loaded;
}

int run_report(const Global& g, const ReportOpts& o) {
  const auto path = o.in.empty() ? out_path(g) : o.in;
  const auto loaded = load_records(path, g.quiet);
  const auto table = load_reference_table(o.reference);
  std::vector<BenchmarkRecord> usable;
  std::size_t skipped = 0;
  for (const auto& r : loaded.records) {
    if (r.instance.n == table.n && r.config.value("shots", std::uint64_t{0}) == table.shots && r.feasibility_ratio) {
      usable.push_back(r);
    } else {
      ++skipped;
    }
  }
  std::cout << "records: " << loaded.records.size() << " loaded, " << usable.size() << " on the n=" << table.n << "/"
            << table.shots << "-shot protocol, " << skipped << " other\n";
  if (!usable.empty()) std::cout << render_report(compare_to_reference(usable, table));

  // Trace aggregation per backend: mean and best over runs at each evaluation.
  std::map<std::string, std::vector<const BenchmarkRecord*>> by_backend;
  for (const auto& r : loaded.records) {
    if (!r.trace.empty()) by_backend[r.backend + " n=" + std::to_string(r.instance.n)].push_back(&r);
  }
  for (const auto& [name, runs] : by_backend) {
    const auto agg = aggregate_traces(runs);
    if (agg.mean.empty()) continue;
    std::cout << name << ": " << runs.size() << " runs, final mean " << agg.mean.back() << ", final best "
              << agg.best.back() << ", overall best " << *std::min_element(agg.best.begin(), agg.best.end()) << '\n';
  }
  return 0;
}

struct PlotOpts {
  std::string in;
  std::string kind = "trace";
  std::string csv;
};

int run_plot(const Global& g, const PlotOpts& o) {
  const auto path = o.in.empty() ? out_path(g) : o.in;
  const auto loaded = load_records(path, g.quiet);
  const auto kind = plot_kind_from_name(o.kind);
  std::vector<BenchmarkRecord> sel;
  for (const auto& r : loaded.records) {
    bool keep = false;
    switch (kind) {
    case PlotKind::Trace: keep = !r.trace.empty(); break;
    case PlotKind::FeasibilityBars: keep = r.feasibility_ratio.has_value(); break;
    case PlotKind::EmbeddingCurve: keep = r.extra_metrics.contains("embedding"); break;
    case PlotKind::AnnealGap: keep = r.backend.rfind("anneal/", 0) == 0; break;
    }
    if (keep) sel.push_back(r);
  }
  if (sel.empty()) throw InvalidArgument("no records in '" + path + "' carry " + o.kind + " data");
  const auto csv = emit_plot_data(sel, kind);
  if (!o.csv.empty()) write_text(o.csv, csv);
  else std::cout << csv;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum TSP benchmarking toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "TOML file with an [experiment] table");
  app.add_option("--out", g.out, "JSON-lines results file (default $QTSP_OUT_DIR/qtsp_results.jsonl)");
  auto* seed_opt = app.add_option("--seed", g.seed, "Run seed; also the instance seed unless --instance-seed");
  app.add_flag("--quiet", g.quiet, "Suppress console output");
  app.fallthrough();

  // Config overlays per subcommand; only the active one is applied.
  std::map<const CLI::App*, std::vector<std::function<void(ConfigOverlay&)>>> overlays;
  auto bind = [&](CLI::App* sub, CLI::Option* opt, auto& var) {
    overlays[sub].push_back([opt, &var](ConfigOverlay& c) { c.apply(opt, var); });
    return opt;
  };
  auto with_instance = [&](CLI::App* sub, std::size_t& n, std::optional<std::uint64_t>& iseed, double& scale) {
    bind(sub, sub->add_option("--n", n, "City count"), n);
    bind(sub, sub->add_option("--instance-seed", iseed, "Instance seed (defaults to --seed)"), iseed);
    bind(sub, sub->add_option("--scale", scale, "Distance scale"), scale);
  };

  EncodeOpts eo;
  auto* enc = app.add_subcommand("encode", "Generate an instance and print its QUBO or Ising form");
  with_instance(enc, eo.n, eo.instance_seed, eo.scale);
  bind(enc, enc->add_option("--penalty", eo.penalty, "default | tight | value"), eo.penalty);
  bind(enc, enc->add_option("--form", eo.form, "qubo | ising"), eo.form);
  bind(enc, enc->add_option("--instance-out", eo.instance_out, "Write the instance JSON here"), eo.instance_out);
  bind(enc, enc->add_option("--qubo-out", eo.qubo_out, "Write the problem JSON here instead of stdout"), eo.qubo_out);

  VqeOpts vo;
  auto* vqe = app.add_subcommand("solve-vqe", "RY-CZ VQE with NFT on a seeded instance");
  with_instance(vqe, vo.n, vo.instance_seed, vo.scale);
  bind(vqe, vqe->add_option("--shots", vo.shots), vo.shots);
  bind(vqe, vqe->add_option("--noise-preset", vo.noise, "none, fez, brisbane, garnet, marmot"), vo.noise);
  bind(vqe, vqe->add_option("--layers", vo.layers), vo.layers);
  bind(vqe, vqe->add_option("--sweeps", vo.sweeps), vo.sweeps);
  bind(vqe, vqe->add_option("--basis", vo.basis, "ry-cz, rxrz-cz, rxrz-rxx (default: preset native)"), vo.basis);
  bind(vqe, vqe->add_flag("--exact", vo.exact, "Statevector expectation instead of shots (noiseless only)"), vo.exact);

  AnnealOpts ao;
  auto* ann = app.add_subcommand("solve-anneal", "Simulated annealing on the Ising form");
  with_instance(ann, ao.n, ao.instance_seed, ao.scale);
  bind(ann, ann->add_option("--reads", ao.reads), ao.reads);
  bind(ann, ann->add_option("--sweeps", ao.sweeps), ao.sweeps);
  bind(ann, ann->add_option("--beta-start", ao.beta_start), ao.beta_start);
  bind(ann, ann->add_option("--beta-end", ao.beta_end), ao.beta_end);
  bind(ann, ann->add_option("--penalty", ao.penalty, "tight | default | value"), ao.penalty);

  RydbergOpts ro;
  auto* ryd = app.add_subcommand("solve-rydberg", "Atom placement plus Bayesian-optimized pulse (VQAA)");
  with_instance(ryd, ro.n, ro.instance_seed, ro.scale);
  bind(ryd, ryd->add_option("--budget", ro.budget), ro.budget);
  bind(ryd, ryd->add_option("--shots", ro.shots), ro.shots);
  bind(ryd, ryd->add_option("--lattice", ro.lattice, "triangular | free"), ro.lattice);
  bind(ryd, ryd->add_option("--duration-ns", ro.duration_ns), ro.duration_ns);
  bind(ryd, ryd->add_flag("--random-search", ro.random_search, "Random search instead of BO"), ro.random_search);
  bind(ryd, ryd->add_option("--register-out", ro.register_out, "Write the register JSON here"), ro.register_out);
  bind(ryd, ryd->add_option("--pulse-out", ro.pulse_out, "Write the best pulse JSON here"), ro.pulse_out);

  EmbedOpts mo;
  auto* emb = app.add_subcommand("embed-estimate", "Minor-embedding size curve for the TSP encoding");
  bind(emb, emb->add_option("--n-range", mo.n_range, "LO:HI"), mo.n_range);
  bind(emb, emb->add_option("--topology", mo.topology, "advantage2 | advantage"), mo.topology);
  bind(emb, emb->add_option("--shore", mo.shore), mo.shore);
  bind(emb, emb->add_option("--inflation", mo.inflation), mo.inflation);
  bind(emb, emb->add_option("--calibrate-cap", mo.calibrate_cap, "Fit the inflation so this n is the largest that fits"),
       mo.calibrate_cap);
  bind(emb, emb->add_option("--csv", mo.csv, "Write the curve CSV here instead of stdout"), mo.csv);

  SweepOpts so;
  auto* swp = app.add_subcommand("sweep-noise", "Feasibility at fixed noiseless-optimal parameters per noise preset");
  with_instance(swp, so.n, so.instance_seed, so.scale);
  bind(swp, swp->add_option("--presets", so.presets, "Comma-separated preset names"), so.presets);
  bind(swp, swp->add_option("--repeats", so.repeats), so.repeats);
  bind(swp, swp->add_option("--shots", so.shots), so.shots);
  bind(swp, swp->add_option("--layers", so.layers), so.layers);
  bind(swp, swp->add_option("--sweeps", so.sweeps), so.sweeps);

  ReportOpts po;
  auto* rep = app.add_subcommand("report", "Compare stored records with the published reference table");
  bind(rep, rep->add_option("--in", po.in, "Records file (default: --out path)"), po.in);
  bind(rep, rep->add_option("--reference", po.reference, "Reference table JSON"), po.reference);

  PlotOpts plo;
  auto* plt = app.add_subcommand("plot-data", "Emit tidy CSV for plotting");
  bind(plt, plt->add_option("--in", plo.in, "Records file (default: --out path)"), plo.in);
  bind(plt, plt->add_option("--kind", plo.kind, "trace, feasibility-bars, embedding-curve, anneal-gap"), plo.kind);
  bind(plt, plt->add_option("--csv", plo.csv, "Write here instead of stdout"), plo.csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (!g.config.empty()) {
      ConfigOverlay c;
      c.load(g.config);
      c.apply(seed_opt, g.seed);
      for (auto& f : overlays[app.get_subcommands().front()]) f(c);
      c.check_all_used();
    }
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "encode") return run_encode(g, eo);
    if (name == "solve-vqe") return run_solve_vqe(g, vo);
    if (name == "solve-anneal") return run_solve_anneal(g, ao);
    if (name == "solve-rydberg") return run_solve_rydberg(g, ro);
    if (name == "embed-estimate") return run_embed(g, mo);
    if (name == "sweep-noise") return run_sweep(g, so);
    if (name == "report") return run_report(g, po);
    if (name == "plot-data") return run_plot(g, plo);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "backend failure: " << e.what() << '\n';
    return kExitBackend;
  }
  return kExitInvalid;
}
