#include "qtsp/bench.hpp"

#include "gtest/gtest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace qtsp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("qtsp_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + QTSP_CLI_PATH + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string run_capture(const std::string& args, const std::string& file) {
  const std::string cmd = std::string(QTSP_CLI_PATH) + " " + args + " > " + file + " 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0) << args;
  std::ifstream is(file);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

std::vector<BenchmarkRecord> records(const std::string& path) {
  auto l = load_all(path);
  EXPECT_TRUE(l.warnings.empty());
  return l.records;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

// Runs the command twice into separate files and compares metrics sections.
void expect_deterministic(const TempDir& d, const std::string& args) {
  ASSERT_EQ(run("--quiet --out " + d / "a.jsonl " + args), 0) << args;
  ASSERT_EQ(run("--quiet --out " + d / "b.jsonl " + args), 0) << args;
  const auto a = records(d / "a.jsonl"), b = records(d / "b.jsonl");
  ASSERT_FALSE(a.empty());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(metrics_json(a[i]).dump(), metrics_json(b[i]).dump()) << args;
    EXPECT_EQ(a[i].config, b[i].config);
  }
  fs::remove(d / "a.jsonl");
  fs::remove(d / "b.jsonl");
}

} // namespace

TEST(Cli, RepeatedRunsHaveIdenticalMetrics) {
  TempDir d("det");
  expect_deterministic(d, "--seed 3 solve-vqe --n 3 --noise-preset garnet");
  expect_deterministic(d, "--seed 1 solve-anneal --n 5 --reads 20");
  expect_deterministic(d, "embed-estimate --n-range 3:15 --calibrate-cap 15");
  expect_deterministic(d, "--seed 2 sweep-noise --n 3 --repeats 3 --presets none,fez");
  expect_deterministic(d, "--seed 2 solve-rydberg --n 3 --budget 12 --shots 50 --duration-ns 500");
}

TEST(Cli, RecordContents) {
  TempDir d("rec");
  ASSERT_EQ(run("--quiet --out " + d / "r.jsonl --seed 5 solve-vqe --n 4 --noise-preset fez"), 0);
  const auto r = records(d / "r.jsonl");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].backend, "vqe/fez");
  EXPECT_EQ(r[0].instance.n, 4u);
  EXPECT_EQ(*r[0].instance.seed, 5u);
  EXPECT_EQ(r[0].config.at("shots"), 200);
  EXPECT_EQ(r[0].config.at("basis"), "rxrz-cz");
  EXPECT_EQ(r[0].trace.size(), 1u + 6 * 9 * 2);
  EXPECT_EQ(r[0].seeds, std::vector<std::uint64_t>{5});
  EXPECT_FALSE(r[0].timestamp.empty());
  EXPECT_FALSE(metrics_json(r[0]).contains("wall_seconds"));
}

TEST(Cli, EncodeWritesInstanceAndQubo) {
  TempDir d("enc");
  ASSERT_EQ(run("--seed 7 encode --n 4 --instance-out " + d / "i.json --qubo-out " + d / "q.json"), 0);
  std::ifstream qi(d / "q.json"), ii(d / "i.json");
  const auto q = qubo_from_json(nlohmann::json::parse(qi));
  const auto inst = instance_from_json(nlohmann::json::parse(ii));
  EXPECT_EQ(q.size(), 9u);
  EXPECT_EQ(inst.n(), 4u);
  const auto expect = generate_instance(4, 7, 1.0);
  EXPECT_EQ(to_json(q), to_json(encode_tsp(expect, default_penalty(expect))));
  const auto a = run_capture("--seed 7 encode --n 3 --form ising", d / "x.txt");
  EXPECT_EQ(a, run_capture("--seed 7 encode --n 3 --form ising", d / "y.txt"));
  EXPECT_NE(a.find("\"J\""), std::string::npos);
}

TEST(Cli, ConfigFileAndOverrides) {
  TempDir d("cfg");
  write(d / "c.toml", "[experiment]\nn = 3\nreads = 15\nsweeps = 100\nseed = 4\n");
  ASSERT_EQ(run("--quiet --config " + d / "c.toml --out " + d / "r.jsonl solve-anneal --sweeps 200"), 0);
  const auto r = records(d / "r.jsonl");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].instance.n, 3u);
  EXPECT_EQ(r[0].config.at("num_reads"), 15);
  EXPECT_EQ(r[0].config.at("sweeps"), 200); // flag wins
  EXPECT_EQ(r[0].seeds[0], 4u);

  write(d / "bad_key.toml", "[experiment]\nshots = 100\n");
  EXPECT_EQ(run("--config " + d / "bad_key.toml solve-anneal"), 2);
  write(d / "bad_type.toml", "[experiment]\nreads = \"many\"\n");
  EXPECT_EQ(run("--config " + d / "bad_type.toml solve-anneal"), 2);
  write(d / "bad_syntax.toml", "[experiment\nreads = 3\n");
  EXPECT_EQ(run("--config " + d / "bad_syntax.toml solve-anneal"), 2);
  EXPECT_EQ(run("--config " + d / "missing.toml solve-anneal"), 2);
}

TEST(Cli, ExitCodes) {
  TempDir d("exit");
  const std::string out = "--out " + d / "r.jsonl ";
  EXPECT_EQ(run(out + "solve-vqe --noise-preset sycamore"), 2);
  EXPECT_EQ(run(out + "solve-vqe --bogus"), 2);
  EXPECT_EQ(run(out), 2); // no subcommand
  EXPECT_EQ(run(out + "solve-anneal --n 2"), 2);
  EXPECT_EQ(run(out + "solve-rydberg --n 4 --lattice hexagonal"), 2);
  EXPECT_EQ(run(out + "solve-rydberg --n 5 --budget 10"), 2); // 16 atoms
  EXPECT_EQ(run(out + "embed-estimate --n-range 15"), 2);
  EXPECT_EQ(run(out + "plot-data --kind trace --in " + d / "none.jsonl"), 2);
  fs::create_directories(d / "dir.jsonl");
  EXPECT_EQ(run("--out " + d / "dir.jsonl solve-anneal --n 3 --reads 2"), 3);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, OutDirFromEnvironment) {
  TempDir d("env");
  ASSERT_EQ(run("--quiet solve-anneal --n 3 --reads 2", "QTSP_OUT_DIR=" + d.path.string()), 0);
  EXPECT_EQ(records(d / "qtsp_results.jsonl").size(), 1u);
}

TEST(Cli, ReportAndPlotData) {
  TempDir d("rep");
  const std::string out = "--quiet --out " + d / "r.jsonl ";
  ASSERT_EQ(run(out + "--seed 1 solve-vqe --n 4 --noise-preset fez"), 0);
  ASSERT_EQ(run(out + "--seed 1 solve-vqe --n 4 --noise-preset brisbane"), 0);
  ASSERT_EQ(run(out + "solve-anneal --n 4 --reads 10"), 0);
  ASSERT_EQ(run(out + "embed-estimate --n-range 3:6"), 0);
  const auto rep = run_capture("--out " + d / "r.jsonl report", d / "report.txt");
  EXPECT_NE(rep.find("4 loaded, 2 on the n=4/200-shot protocol"), std::string::npos) << rep;
  EXPECT_NE(rep.find("90.5"), std::string::npos);

  ASSERT_EQ(run(out + "plot-data --kind embedding-curve --csv " + d / "e.csv"), 0);
  std::ifstream is(d / "e.csv");
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "record,topology,n,logical_vars,chain_length,physical_qubits,coupler_usage,fits");
  std::size_t rows = 0;
  for (std::string l; std::getline(is, l);) ++rows;
  EXPECT_EQ(rows, 4u);
  const auto trace = run_capture("--out " + d / "r.jsonl plot-data --kind trace", d / "t.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 1 + 2 * 109);
  EXPECT_EQ(run(out + "plot-data --kind anneal-gap"), 0);
  EXPECT_EQ(run(out + "plot-data --kind feasibility-bars"), 0);
}
