#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/harness.hpp"
#include "support/tempdir.hpp"

using namespace qpart;
using qpart::testing::TempDir;
using qpart::testing::read_file;
using Catch::Approx;

namespace {

Circuit circuit_with(int n, int multiqubit_gates) {
  Circuit c;
  c.id = "synthetic";
  c.num_qubits = n;
  for (int i = 0; i < multiqubit_gates; ++i) c.gates.push_back({"cx", {i % n, (i + 1) % n}, {}});
  return c;
}

// Comparable view of a results CSV: header plus rows with the elapsed_ms
// column removed, optionally sorted.
std::vector<std::string> csv_rows_without_elapsed(const std::string& text, bool sorted) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t last_comma = line.rfind(',');
    rows.push_back(line.substr(0, last_comma));
  }
  if (sorted) std::sort(rows.begin() + 1, rows.end());
  return rows;
}

BenchConfig smoke_config(const std::filesystem::path& out) {
  BenchConfig cfg;
  cfg.manifests = {
      {GenKind::Ghz, 10, 12, 2, 1, 0, {}},
      {GenKind::RandomUniform, 10, 12, 2, 1, 6, {{"two_qubit_fraction", 0.66}}},
  };
  cfg.k_min = 2;
  cfg.k_max = 2;
  cfg.strategies = {"random", "greedy", "fm"};
  cfg.seed = 77;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("admit reproduces the filter boundaries") {
  BenchConfig cfg;
  // n=130 is inside the width cap and satisfies n >= 5k up to k=26.
  Circuit wide = circuit_with(130, 200);
  CHECK(admit(wide, cfg, 10).admitted);
  CHECK(admit(wide, cfg, 26).admitted);
  CHECK_FALSE(admit(wide, cfg, 27).admitted);

  Circuit narrow = circuit_with(12, 5);
  AdmitDecision rejected = admit(narrow, cfg, 3);
  CHECK_FALSE(rejected.admitted);
  CHECK(rejected.reason.find("n=12 <") != std::string::npos);
  CHECK(admit(narrow, cfg, 2).admitted);

  CHECK_FALSE(admit(circuit_with(131, 10), cfg, 2).admitted);
  CHECK(admit(circuit_with(100, 20000), cfg, 2).admitted);
  CHECK_FALSE(admit(circuit_with(100, 20001), cfg, 2).admitted);
}

TEST_CASE("config parser reads every section") {
  const std::string text = R"(
# smoke config
seed = 9
epsilon = 0.1
k_min = 2
k_max = 4
min_qubits_per_qpu = 4
max_qubits = 64
max_multiqubit_gates = 500
parallelism = 2
output_dir = out
strategies = random, fm , ea

[source]
dir = circuits/real
origin = real

[generate]
kind = qaoa
n_min = 8
n_max = 16
n_step = 4
seeds = 2
edge_probability = 0.25
layers = 2

[strategy.stochg]
iterations = 50

[strategy.ea]
population = 16
generations = 30
tournament = 4
mutation_rate = 0.1
elite = 1

[external.zoltan]
command = solver {input} {k} {output}
timeout_ms = 2500
)";
  BenchConfig cfg = parse_config(text);
  CHECK(cfg.seed == 9);
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.k_min == 2);
  CHECK(cfg.k_max == 4);
  CHECK(cfg.min_qubits_per_qpu == 4);
  CHECK(cfg.max_qubits == 64);
  CHECK(cfg.max_multiqubit_gates == 500);
  CHECK(cfg.parallelism == 2);
  CHECK(cfg.output_dir == std::filesystem::path("out"));
  CHECK(cfg.strategies == std::vector<std::string>{"random", "fm", "ea"});
  REQUIRE(cfg.sources.size() == 1);
  CHECK(cfg.sources[0].origin == Origin::Real);
  REQUIRE(cfg.manifests.size() == 1);
  CHECK(cfg.manifests[0].kind == GenKind::QaoaMaxcut);
  CHECK(cfg.manifests[0].seeds == 2);
  CHECK(cfg.manifests[0].extra.at("layers") == 2.0);
  REQUIRE(cfg.stochg.iterations.has_value());
  CHECK(*cfg.stochg.iterations == 50);
  CHECK(cfg.ea.population_size == 16);
  CHECK(cfg.ea.elite_count == 1);
  REQUIRE(cfg.externals.size() == 1);
  CHECK(cfg.externals[0].name == "zoltan");
  CHECK(cfg.externals[0].timeout_ms == 2500);
}

TEST_CASE("config parser rejects unknown keys and malformed sections") {
  CHECK_THROWS_AS(parse_config("sead = 3\n"), ConfigError);                       // typo
  CHECK_THROWS_AS(parse_config("[warp]\nspeed = 9\n"), ConfigError);              // unknown section
  CHECK_THROWS_AS(parse_config("k_min = fast\n"), ConfigError);                   // bad int
  CHECK_THROWS_AS(parse_config("[source]\ndir = x\n"), ConfigError);              // missing origin
  CHECK_THROWS_AS(parse_config("[generate]\nkind = ghz\n"), ConfigError);         // missing range
  CHECK_THROWS_AS(parse_config("[external.z]\ntimeout_ms = 5\n"), ConfigError);   // missing command
  CHECK_THROWS_AS(parse_config("k_min = 5\nk_max = 2\n"), ConfigError);           // empty range
  CHECK_THROWS_AS(parse_config("strategies = ,\n"), ConfigError);                 // empty list
  CHECK_THROWS_AS(parse_config("[source]\ndir = x\norigin = martian\n"), std::invalid_argument);
}

TEST_CASE("load_bench_circuits labels origins and skips unreadable files") {
  TempDir dir("sources");
  dir.write_file("good.qasm", "OPENQASM 2.0;\nqreg q[6];\ncx q[0],q[1];\n");
  dir.write_file("broken.qasm", "OPENQASM 2.0;\nqreg q[2];\nmystery q[0];\n");
  dir.write_file("ignored.txt", "not a circuit");

  BenchConfig cfg;
  cfg.sources = {{dir.path(), Origin::Real}};
  cfg.manifests = {{GenKind::Ghz, 5, 5, 1, 1, 0, {}}};
  cfg.output_dir = dir.path() / "out";

  std::ostringstream log;
  std::vector<LoadedCircuit> loaded = load_bench_circuits(cfg, log);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].circuit.id == "ghz-n5-s0");
  CHECK(loaded[0].circuit.origin == Origin::Generated);
  CHECK(loaded[1].circuit.id == "good");
  CHECK(loaded[1].circuit.origin == Origin::Real);
  CHECK(log.str().find("broken.qasm") != std::string::npos);
  CHECK(std::filesystem::exists(cfg.output_dir / "generated" / "ghz-n5-s0.qasm"));
}

TEST_CASE("run_sweep produces one record per admitted job") {
  TempDir dir("sweep");
  BenchConfig cfg = smoke_config(dir.path() / "out");
  std::ostringstream log;
  SweepStats stats = run_sweep(cfg, log);
  // 4 circuits (ghz n=10,12; randu n=10,12), k=2 only, 3 strategies
  CHECK(stats.circuits == 4);
  CHECK(stats.jobs_total == 12);
  CHECK(stats.jobs_run == 12);

  std::vector<BenchRecord> records = read_results_csv(stats.results_csv);
  REQUIRE(records.size() == 12);
  std::map<std::pair<std::string, int>, int> baseline_count;
  for (const BenchRecord& r : records) {
    CHECK(r.ok());
    CHECK(r.k == 2);
    CHECK(r.n_qubits <= cfg.max_qubits);
    CHECK(r.n_multiqubit_gates <= cfg.max_multiqubit_gates);
    CHECK(r.n_qubits >= cfg.min_qubits_per_qpu * r.k);
    if (r.strategy == "random") baseline_count[{r.circuit_id, r.k}]++;
  }
  CHECK(baseline_count.size() == 4);
  for (const auto& [key, count] : baseline_count) CHECK(count == 1);

  // canonical order: rows sorted by (circuit_id, k, strategy)
  std::vector<std::string> keys;
  for (const BenchRecord& r : records)
    keys.push_back(r.circuit_id + "|" + std::to_string(r.k) + "|" + r.strategy);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("run_sweep is deterministic and parallel-agnostic") {
  TempDir dir("determinism");
  BenchConfig first = smoke_config(dir.path() / "a");
  BenchConfig second = smoke_config(dir.path() / "b");
  BenchConfig parallel = smoke_config(dir.path() / "p");
  parallel.parallelism = 8;

  std::ostringstream log;
  SweepStats a = run_sweep(first, log);
  SweepStats b = run_sweep(second, log);
  SweepStats p = run_sweep(parallel, log);

  auto rows_a = csv_rows_without_elapsed(read_file(a.results_csv), false);
  auto rows_b = csv_rows_without_elapsed(read_file(b.results_csv), false);
  REQUIRE(rows_a == rows_b);

  auto sorted_a = csv_rows_without_elapsed(read_file(a.results_csv), true);
  auto sorted_p = csv_rows_without_elapsed(read_file(p.results_csv), true);
  REQUIRE(sorted_a == sorted_p);
}

TEST_CASE("run_sweep resumes from a partial results file without duplicates") {
  TempDir dir("resume");
  BenchConfig full_cfg = smoke_config(dir.path() / "full");
  std::ostringstream log;
  SweepStats full = run_sweep(full_cfg, log);
  std::vector<std::string> full_rows = csv_rows_without_elapsed(read_file(full.results_csv), false);

  // Simulate a run killed after the first 5 rows: keep a prefix of the CSV
  // (and its journal lines), then resume.
  BenchConfig resumed_cfg = smoke_config(dir.path() / "resumed");
  std::filesystem::create_directories(resumed_cfg.output_dir);
  {
    std::ifstream in(full.results_csv);
    std::ofstream csv(resumed_cfg.output_dir / "results.csv");
    std::ofstream journal(resumed_cfg.output_dir / "journal.txt");
    std::string line;
    for (int i = 0; i <= 5 && std::getline(in, line); ++i) {
      csv << line << '\n';
      if (i > 0) {
        BenchRecord r = bench_record_from_csv_row(line);
        journal << r.circuit_id << ',' << r.k << ',' << r.strategy << '\n';
      }
    }
  }
  SweepStats resumed = run_sweep(resumed_cfg, log);
  CHECK(resumed.jobs_resumed == 5);
  CHECK(resumed.jobs_run == full_rows.size() - 1 - 5);

  std::vector<BenchRecord> records = read_results_csv(resumed.results_csv);
  std::set<std::string> seen;
  for (const BenchRecord& r : records)
    REQUIRE(seen.insert(r.circuit_id + "|" + std::to_string(r.k) + "|" + r.strategy).second);
  REQUIRE(csv_rows_without_elapsed(read_file(resumed.results_csv), false) == full_rows);
}

TEST_CASE("run_sweep records failed strategies and continues") {
  TempDir dir("failures");
  BenchConfig cfg = smoke_config(dir.path() / "out");
  cfg.strategies = {"random", "greedy", "boom"};
  cfg.externals = {{"boom", "exit 7", 5000}};
  std::ostringstream log;
  SweepStats stats = run_sweep(cfg, log);
  std::vector<BenchRecord> records = read_results_csv(stats.results_csv);
  int failed = 0, ok = 0;
  for (const BenchRecord& r : records) {
    if (r.strategy == "boom") {
      CHECK_FALSE(r.ok());
      ++failed;
    } else {
      CHECK(r.ok());
      ++ok;
    }
  }
  CHECK(failed == 4);
  CHECK(ok == 8);
  CHECK(log.str().find("boom") != std::string::npos);
}

TEST_CASE("run_sweep drives external solvers from the config") {
  TempDir dir("external-sweep");
  auto script = dir.write_script("roundrobin.sh", R"(#!/bin/sh
V=$(head -n 1 "$1" | awk '{print $2}')
: > "$3"
i=0
while [ "$i" -lt "$V" ]; do
  echo $((i % $2)) >> "$3"
  i=$((i+1))
done
)");
  BenchConfig cfg = smoke_config(dir.path() / "out");
  cfg.strategies = {"random", "mock"};
  cfg.externals = {{"mock", "sh " + script.string() + " {input} {k} {output}", 10000}};
  std::ostringstream log;
  SweepStats stats = run_sweep(cfg, log);

  std::map<std::string, Circuit> by_id;
  for (Circuit& c : generate_suite(cfg.manifests)) by_id[c.id] = std::move(c);
  int mock_rows = 0;
  for (const BenchRecord& r : read_results_csv(stats.results_csv)) {
    if (r.strategy != "mock") continue;
    ++mock_rows;
    REQUIRE(r.ok());
    const Circuit& c = by_id.at(r.circuit_id);
    Hypergraph h = circuit_to_hypergraph(c);
    Assignment round_robin(c.num_qubits);
    for (int v = 0; v < c.num_qubits; ++v) round_robin[v] = v % r.k;
    CHECK(r.cut_cost == cut_report(h, make_spec(c.num_qubits, r.k, cfg.epsilon), round_robin).cut_cost);
  }
  CHECK(mock_rows == 4);
}

TEST_CASE("run_sweep rejects unknown strategies in the config") {
  TempDir dir("badstrategy");
  BenchConfig cfg = smoke_config(dir.path() / "out");
  cfg.strategies = {"random", "kahypar"};
  std::ostringstream log;
  CHECK_THROWS_AS(run_sweep(cfg, log), ConfigError);
}

TEST_CASE("summarize writes the analysis artifacts") {
  TempDir dir("summary");
  BenchConfig cfg = smoke_config(dir.path() / "out");
  std::ostringstream log;
  SweepStats stats = run_sweep(cfg, log);
  SummaryPaths paths = summarize(stats.results_csv, Origin::Generated);

  std::string by_k = read_file(paths.rankings_by_k);
  CHECK(by_k.rfind("origin_group,k,rank_1,rank_2", 0) == 0);
  CHECK(by_k.find("generated,2,") != std::string::npos);
  CHECK(by_k.find("random,2,") != std::string::npos);

  std::string distortion = read_file(paths.distortion);
  CHECK(distortion.rfind("origin,vs_reference_rho", 0) == 0);
  REQUIRE(std::count(distortion.begin(), distortion.end(), '\n') == 2);  // header + random row
  CHECK(distortion.find("random,") != std::string::npos);

  CHECK(read_file(paths.totals).rfind("origin,strategy,total_cut_cost", 0) == 0);
  CHECK(read_file(paths.dispersion_grid).rfind("origin,strategy,k,", 0) == 0);
  CHECK(read_file(paths.distortion_by_k).rfind("origin,k,vs_reference_rho", 0) == 0);
}

TEST_CASE("summarize rejects empty or single-origin inputs") {
  TempDir dir("summary-errors");
  auto empty_csv = dir.write_file("empty.csv", std::string(bench_csv_header()) + "\n");
  CHECK_THROWS_AS(summarize(empty_csv, Origin::Real), std::invalid_argument);

  BenchConfig cfg = smoke_config(dir.path() / "out");
  cfg.manifests = {{GenKind::Ghz, 10, 12, 2, 1, 0, {}}};  // one origin only
  std::ostringstream log;
  SweepStats stats = run_sweep(cfg, log);
  CHECK_THROWS_AS(summarize(stats.results_csv, Origin::Generated), std::invalid_argument);
  CHECK_THROWS_AS(summarize(dir.path() / "missing.csv", Origin::Real), FormatError);
}

TEST_CASE("summarize aggregates match a hand-computed fixture") {
  // 12 rows: two circuits x one k x three strategies x two origins.
  TempDir dir("fixture");
  std::ostringstream csv;
  csv << bench_csv_header() << '\n';
  auto row = [&](const std::string& id, const std::string& origin, const std::string& strategy,
                 int cut) {
    csv << id << ',' << origin << ",10,5,20,2," << strategy << ',' << cut << ",,,true,ok,1,0.5\n";
  };
  row("g1", "generated", "random", 10);
  row("g1", "generated", "fm", 2);
  row("g1", "generated", "greedy", 4);
  row("g2", "generated", "random", 10);
  row("g2", "generated", "fm", 4);
  row("g2", "generated", "greedy", 6);
  row("r1", "random", "random", 10);
  row("r1", "random", "fm", 8);
  row("r1", "random", "greedy", 5);
  row("r2", "random", "random", 10);
  row("r2", "random", "fm", 6);
  row("r2", "random", "greedy", 9);
  auto path = dir.write_file("results.csv", csv.str());

  SummaryPaths paths = summarize(path, Origin::Generated, dir.path() / "analysis");

  // generated: fm mean rel (0.2+0.4)/2=0.3 < greedy (0.4+0.6)/2=0.5
  // random origin: greedy (0.5+0.9)/2=0.7 < fm (0.8+0.6)/2=0.7 -- tie on rel!
  // tie broken by mean per_qubit: greedy (0.5+0.9)/2=0.7, fm (0.8+0.6)/2=0.7 also
  // tie -> name order: fm before greedy.
  std::string by_k = read_file(paths.rankings_by_k);
  CHECK(by_k.find("generated,2,fm,greedy") != std::string::npos);
  CHECK(by_k.find("random,2,fm,greedy") != std::string::npos);

  // totals: generated/fm cut 6, generated/greedy 10, random baseline 20 each
  std::string totals = read_file(paths.totals);
  CHECK(totals.find("generated,fm,6,0.3,2,0") != std::string::npos);
  CHECK(totals.find("generated,greedy,10,0.5,2,0") != std::string::npos);
  CHECK(totals.find("generated,random,20,1,2,0") != std::string::npos);
  CHECK(totals.find("random,fm,14,0.7,2,0") != std::string::npos);
}
