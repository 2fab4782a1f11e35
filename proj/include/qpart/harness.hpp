#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qpart/bench_record.hpp"
#include "qpart/config.hpp"
#include "qpart/generators.hpp"
#include "qpart/hypergraph.hpp"
#include "qpart/qasm.hpp"
#include "qpart/registry.hpp"
#include "qpart/stats.hpp"

namespace qpart {

struct AdmitDecision {
  bool admitted = true;
  std::string reason;
};

// Admission filters: width cap, multi-qubit gate cap, and the per-QPU
// minimum n >= min_qubits_per_qpu * k.
inline AdmitDecision admit(const Circuit& c, const BenchConfig& cfg, int k) {
  GateStats stats = gate_stats(c);
  if (c.num_qubits > cfg.max_qubits)
    return {false, "n=" + std::to_string(c.num_qubits) + " exceeds max_qubits=" + std::to_string(cfg.max_qubits)};
  if (static_cast<std::int64_t>(stats.multiqubit_gates) > cfg.max_multiqubit_gates)
    return {false, "multiqubit_gates=" + std::to_string(stats.multiqubit_gates) +
                       " exceeds max_multiqubit_gates=" + std::to_string(cfg.max_multiqubit_gates)};
  if (c.num_qubits < cfg.min_qubits_per_qpu * k)
    return {false, "n=" + std::to_string(c.num_qubits) + " < min_qubits_per_qpu*k=" +
                       std::to_string(cfg.min_qubits_per_qpu * k)};
  return {true, ""};
}

inline StrategyRegistry make_registry(const BenchConfig& cfg) {
  StrategyRegistry registry;
  registry.stochg = cfg.stochg;
  registry.ea = cfg.ea;
  for (const ExternalSolverConfig& solver : cfg.externals) registry.register_external(solver);
  return registry;
}

struct LoadedCircuit {
  Circuit circuit;
  Hypergraph hypergraph;
  GateStats stats;
};

// Materializes generator manifests (QASM persisted under
// output_dir/generated) and parses every *.qasm in the source directories.
// Unreadable or unparsable files are logged and skipped.
inline std::vector<LoadedCircuit> load_bench_circuits(const BenchConfig& cfg, std::ostream& log) {
  std::vector<Circuit> circuits = generate_suite(cfg.manifests, cfg.output_dir / "generated");
  for (const SourceDir& source : cfg.sources) {
    if (!std::filesystem::is_directory(source.dir))
      throw ConfigError("source directory '" + source.dir.string() + "' does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(source.dir))
      if (entry.is_regular_file() && entry.path().extension() == ".qasm") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const std::filesystem::path& file : files) {
      try {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open file");
        std::stringstream buffer;
        buffer << in.rdbuf();
        Circuit c = parse_qasm(buffer.str());
        c.id = file.stem().string();
        c.origin = source.origin;
        circuits.push_back(std::move(c));
      } catch (const std::exception& e) {
        log << "skipping " << file.string() << ": " << e.what() << '\n';
      }
    }
  }

  std::sort(circuits.begin(), circuits.end(),
            [](const Circuit& a, const Circuit& b) { return a.id < b.id; });
  std::vector<LoadedCircuit> loaded;
  for (Circuit& c : circuits) {
    if (c.id.empty() || c.id.find(',') != std::string::npos)
      throw std::runtime_error("circuit id '" + c.id + "' is empty or contains a comma");
    if (!loaded.empty() && loaded.back().circuit.id == c.id)
      throw std::runtime_error("duplicate circuit id '" + c.id + "' across sources");
    LoadedCircuit lc;
    lc.hypergraph = circuit_to_hypergraph(c);
    lc.stats = gate_stats(c);
    lc.circuit = std::move(c);
    loaded.push_back(std::move(lc));
  }
  return loaded;
}

namespace detail {

inline std::string job_key(const std::string& circuit_id, int k, const std::string& strategy) {
  return circuit_id + "," + std::to_string(k) + "," + strategy;
}

inline std::uint64_t job_seed(std::uint64_t global_seed, const std::string& circuit_id, int k,
                              const std::string& strategy) {
  std::uint64_t s = mix_seed(global_seed, circuit_id);
  s = mix_seed(s, static_cast<std::uint64_t>(k));
  return mix_seed(s, strategy);
}

}  // namespace detail

struct SweepStats {
  std::filesystem::path results_csv;
  std::size_t circuits = 0;
  std::size_t jobs_total = 0;
  std::size_t jobs_run = 0;
  std::size_t jobs_resumed = 0;
};

// Runs the (circuit x k x strategy) sweep. One lowering per circuit, the
// random baseline always included, deterministic per-job seeds, rows written
// in canonical (circuit_id, k, strategy) order. An existing results.csv is
// resumed: rows already present are kept, their jobs skipped.
inline SweepStats run_sweep(const BenchConfig& cfg, std::ostream& log = std::cerr) {
  validate(cfg);
  StrategyRegistry registry = make_registry(cfg);
  std::set<std::string> strategy_set(cfg.strategies.begin(), cfg.strategies.end());
  strategy_set.insert(kBaselineStrategy);
  for (const std::string& s : strategy_set)
    if (!registry.has(s)) throw ConfigError("unknown strategy '" + s + "' in config");
  const std::vector<std::string> strategies(strategy_set.begin(), strategy_set.end());

  std::filesystem::create_directories(cfg.output_dir);
  const std::vector<LoadedCircuit> circuits = load_bench_circuits(cfg, log);
  if (circuits.empty()) throw std::runtime_error("no circuits to benchmark");

  struct Job {
    const LoadedCircuit* circuit;
    int k;
    const std::string* strategy;
    PartitionSpec spec;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::map<std::pair<std::string, int>, Weight> baseline_cut;
  for (const LoadedCircuit& lc : circuits) {
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      AdmitDecision decision = admit(lc.circuit, cfg, k);
      if (!decision.admitted) {
        log << "skipping " << lc.circuit.id << " at k=" << k << ": " << decision.reason << '\n';
        continue;
      }
      PartitionSpec spec = make_spec(lc.circuit.num_qubits, k, cfg.epsilon);
      PartitionRequest baseline_req{lc.hypergraph, spec,
                                    detail::job_seed(cfg.seed, lc.circuit.id, k, kBaselineStrategy),
                                    std::nullopt};
      baseline_cut[{lc.circuit.id, k}] = partition_random(baseline_req).report.cut_cost;
      for (const std::string& strategy : strategies)
        jobs.push_back({&lc, k, &strategy, spec, detail::job_seed(cfg.seed, lc.circuit.id, k, strategy)});
    }
  }

  const std::filesystem::path csv_path = cfg.output_dir / "results.csv";
  const std::filesystem::path journal_path = cfg.output_dir / "journal.txt";

  // Resume: rows already in the CSV are authoritative.
  std::set<std::string> done;
  bool resuming = std::filesystem::exists(csv_path);
  if (resuming) {
    std::ifstream in(csv_path);
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != bench_csv_header())
      throw FormatError("existing results csv has an unexpected header");
    while (std::getline(in, line)) {
      if (detail::trim(line).empty()) continue;
      BenchRecord r = bench_record_from_csv_row(line);
      if (!done.insert(detail::job_key(r.circuit_id, r.k, r.strategy)).second)
        throw FormatError("existing results csv has duplicate row for " +
                          detail::job_key(r.circuit_id, r.k, r.strategy));
    }
  }

  std::ofstream csv(csv_path, resuming ? std::ios::app : std::ios::trunc);
  std::ofstream journal(journal_path, resuming ? std::ios::app : std::ios::trunc);
  if (!csv || !journal) throw std::runtime_error("cannot open output files in " + cfg.output_dir.string());
  if (!resuming) csv << bench_csv_header() << '\n' << std::flush;

  const std::size_t num_jobs = jobs.size();
  std::vector<std::string> rows(num_jobs);
  std::vector<std::string> keys(num_jobs);
  std::vector<char> ready(num_jobs, 0);
  std::vector<char> already_written(num_jobs, 0);
  std::size_t resumed = 0;
  for (std::size_t i = 0; i < num_jobs; ++i) {
    keys[i] = detail::job_key(jobs[i].circuit->circuit.id, jobs[i].k, *jobs[i].strategy);
    if (done.count(keys[i])) {
      ready[i] = already_written[i] = 1;
      ++resumed;
    }
  }

  std::mutex sink_mutex;
  std::size_t next_flush = 0;
  auto flush_ready = [&]() {  // sink_mutex held
    while (next_flush < num_jobs && ready[next_flush]) {
      if (!already_written[next_flush]) {
        csv << rows[next_flush] << '\n';
        csv.flush();
        journal << keys[next_flush] << '\n';
        journal.flush();
      }
      ++next_flush;
    }
  };
  {
    std::lock_guard<std::mutex> lock(sink_mutex);
    flush_ready();
  }

  auto execute = [&](const Job& job) -> BenchRecord {
    const LoadedCircuit& lc = *job.circuit;
    BenchRecord r;
    r.circuit_id = lc.circuit.id;
    r.origin = lc.circuit.origin;
    r.n_qubits = lc.circuit.num_qubits;
    r.n_edges = static_cast<int>(lc.hypergraph.edges.size());
    r.n_multiqubit_gates = static_cast<std::int64_t>(lc.stats.multiqubit_gates);
    r.k = job.k;
    r.strategy = *job.strategy;
    r.seed = job.seed;
    try {
      PartitionRequest req{lc.hypergraph, job.spec, job.seed, std::nullopt};
      PartitionOutcome out = registry.run(*job.strategy, req);
      r.cut_cost = out.report.cut_cost;
      r.balanced = out.report.balanced;
      r.elapsed_ms = out.elapsed_ms;
      r.per_qubit = static_cast<double>(r.cut_cost) / r.n_qubits;
      Weight base = baseline_cut.at({r.circuit_id, r.k});
      if (base > 0) {
        r.rel_to_baseline = static_cast<double>(r.cut_cost) / static_cast<double>(base);
      } else {
        r.rel_to_baseline = r.cut_cost == 0 ? 1.0 : std::numeric_limits<double>::infinity();
        r.degenerate = true;
      }
      r.status = "ok";
    } catch (const std::exception& e) {
      r.status = "failed";
      std::lock_guard<std::mutex> lock(sink_mutex);
      log << "strategy " << *job.strategy << " failed on " << r.circuit_id << " k=" << r.k << ": "
          << e.what() << '\n';
    }
    return r;
  };

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= num_jobs) break;
      if (already_written[i]) continue;
      std::string row = to_csv_row(execute(jobs[i]));
      std::lock_guard<std::mutex> lock(sink_mutex);
      rows[i] = std::move(row);
      ready[i] = 1;
      flush_ready();
    }
  };
  if (cfg.parallelism <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < cfg.parallelism; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepStats stats;
  stats.results_csv = csv_path;
  stats.circuits = circuits.size();
  stats.jobs_total = num_jobs;
  stats.jobs_resumed = resumed;
  stats.jobs_run = num_jobs - resumed;
  return stats;
}

inline std::vector<BenchRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read results csv '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != bench_csv_header())
    throw FormatError("results csv has an unexpected header");
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    records.push_back(bench_record_from_csv_row(line));
  }
  return records;
}

struct SummaryPaths {
  std::filesystem::path rankings_by_k;
  std::filesystem::path rankings_by_bin;
  std::filesystem::path distortion;
  std::filesystem::path distortion_by_k;
  std::filesystem::path totals;
  std::filesystem::path dispersion_grid;
};

// Aggregates a results CSV: rank tables by k and by qubit bin, the
// distortion report against the reference origin, total cut per
// (origin, strategy), and the per-(origin, strategy, k) dispersion grid.
inline SummaryPaths summarize(const std::filesystem::path& results_csv, Origin reference,
                              const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
  std::vector<BenchRecord> records = read_results_csv(results_csv);
  std::size_t usable = 0;
  for (const BenchRecord& r : records) usable += r.ok();
  if (usable == 0) throw std::invalid_argument("results csv has no usable rows");
  normalized_costs(records);

  const std::filesystem::path dir = out_dir.value_or(results_csv.parent_path());
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& name, const std::string& content) {
    std::ofstream out(dir / name);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return dir / name;
  };

  SummaryPaths paths;
  paths.rankings_by_k = write("rankings_by_k.csv", rankings_csv(rank_strategies(records, GroupBy::K)));
  paths.rankings_by_bin =
      write("rankings_by_bin.csv", rankings_csv(rank_strategies(records, GroupBy::QubitBin)));

  DistortionReport report = distortion_report(records, reference);
  paths.distortion = write("distortion.csv", distortion_csv(report));
  {
    std::ostringstream out;
    out << "origin,k,vs_reference_rho\n";
    for (const OriginDistortion& od : report.origins)
      for (const auto& [k, rho] : od.rho_per_k)
        out << od.origin << ',' << k << ',' << detail::format_stat(rho) << '\n';
    paths.distortion_by_k = write("distortion_by_k.csv", out.str());
  }

  {
    struct Totals {
      Weight cut = 0;
      double per_qubit_sum = 0.0;
      std::int64_t rows = 0;
      std::int64_t degenerate = 0;
    };
    std::map<std::pair<std::string, std::string>, Totals> totals;
    for (const BenchRecord& r : records) {
      if (!r.ok()) continue;
      Totals& t = totals[{to_string(r.origin), r.strategy}];
      t.cut += r.cut_cost;
      t.per_qubit_sum += r.per_qubit;
      t.rows += 1;
      t.degenerate += r.degenerate;
    }
    std::ostringstream out;
    out << "origin,strategy,total_cut_cost,mean_per_qubit,rows,degenerate_rows\n";
    for (const auto& [key, t] : totals)
      out << key.first << ',' << key.second << ',' << t.cut << ','
          << detail::format_stat(t.per_qubit_sum / static_cast<double>(t.rows)) << ',' << t.rows << ','
          << t.degenerate << '\n';
    paths.totals = write("totals_by_origin_strategy.csv", out.str());
  }

  {
    std::map<std::tuple<std::string, std::string, int>, std::pair<Sample, Sample>> cells;
    for (const BenchRecord& r : records) {
      if (!r.ok()) continue;
      auto& [per_qubit, rel] = cells[{to_string(r.origin), r.strategy, r.k}];
      per_qubit.push_back(r.per_qubit);
      if (!r.degenerate) rel.push_back(r.rel_to_baseline);
    }
    std::ostringstream out;
    out << "origin,strategy,k,variance_per_qubit,iqr_per_qubit,variance_rel,iqr_rel\n";
    for (const auto& [key, samples] : cells) {
      const auto& [per_qubit, rel] = samples;
      out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
          << detail::format_stat(detail::sample_variance(per_qubit)) << ','
          << detail::format_stat(detail::interquartile_range(per_qubit)) << ','
          << detail::format_stat(detail::sample_variance(rel)) << ','
          << detail::format_stat(detail::interquartile_range(rel)) << '\n';
    }
    paths.dispersion_grid = write("dispersion_grid.csv", out.str());
  }
  return paths;
}

}  // namespace qpart
