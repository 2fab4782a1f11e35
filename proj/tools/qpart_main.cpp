// qpart: circuit-to-hypergraph compiler, balanced k-way partitioner suite,
// and benchmark harness front end.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qpart/qpart.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

struct ParseArgs {
  std::string qasm_path;
  std::string out_path;
};

int cmd_parse(const ParseArgs& args) {
  qpart::Circuit circuit = qpart::parse_qasm(read_text_file(args.qasm_path));
  circuit.id = std::filesystem::path(args.qasm_path).stem().string();
  qpart::Hypergraph h = qpart::circuit_to_hypergraph(circuit);
  if (!args.out_path.empty()) write_text_file(args.out_path, qpart::write_hmetis(h));
  std::cout << "n=" << h.num_vertices << " edges=" << h.edges.size()
            << " mq_gates=" << qpart::gate_stats(circuit).multiqubit_gates << '\n';
  return 0;
}

struct GenerateArgs {
  std::string kind;
  int qubits = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::optional<double> two_qubit_fraction;
  std::optional<double> edge_probability;
  std::optional<int> layers;
};

int cmd_generate(const GenerateArgs& args) {
  qpart::GenSpec spec;
  spec.kind = qpart::kind_from_string(args.kind);
  spec.num_qubits = args.qubits;
  spec.depth = args.depth;
  spec.seed = args.seed;
  if (args.two_qubit_fraction) spec.extra["two_qubit_fraction"] = *args.two_qubit_fraction;
  if (args.edge_probability) spec.extra["edge_probability"] = *args.edge_probability;
  if (args.layers) spec.extra["layers"] = static_cast<double>(*args.layers);
  qpart::Circuit circuit = qpart::generate(spec);
  write_text_file(args.out_path, qpart::write_qasm(circuit));
  return 0;
}

struct PartitionArgs {
  std::string hmetis_path;
  std::string strategy;
  int k = 2;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> iterations;
  std::optional<std::int64_t> budget_ms;
  std::string assignment_out;
};

int cmd_partition(const PartitionArgs& args) {
  qpart::StrategyRegistry registry;
  registry.stochg.iterations = args.iterations;
  qpart::Hypergraph h = qpart::read_hmetis(read_text_file(args.hmetis_path));
  qpart::PartitionSpec spec = qpart::make_spec(h.num_vertices, args.k, args.epsilon);
  qpart::PartitionRequest request{h, spec, args.seed, args.budget_ms};
  qpart::PartitionOutcome outcome = registry.run(args.strategy, request);
  if (!args.assignment_out.empty())
    write_text_file(args.assignment_out, qpart::write_partition_file(outcome.assignment));
  std::cout << "strategy=" << outcome.strategy << " k=" << args.k << " cut=" << outcome.report.cut_cost
            << " balanced=" << (outcome.report.balanced ? "true" : "false") << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path) {
  qpart::BenchConfig cfg = qpart::load_config(config_path);
  qpart::SweepStats stats = qpart::run_sweep(cfg, std::cerr);
  std::cerr << "circuits=" << stats.circuits << " jobs=" << stats.jobs_total
            << " run=" << stats.jobs_run << " resumed=" << stats.jobs_resumed << '\n';
  std::cout << "results=" << stats.results_csv.string() << '\n';
  return 0;
}

struct AnalyzeArgs {
  std::string results_path;
  std::string reference = "real";
  std::string out_dir;
};

int cmd_analyze(const AnalyzeArgs& args) {
  std::optional<std::filesystem::path> out;
  if (!args.out_dir.empty()) out = args.out_dir;
  qpart::SummaryPaths paths =
      qpart::summarize(args.results_path, qpart::origin_from_string(args.reference), out);
  std::cout << "rankings_by_k=" << paths.rankings_by_k.string() << '\n'
            << "rankings_by_bin=" << paths.rankings_by_bin.string() << '\n'
            << "distortion=" << paths.distortion.string() << '\n'
            << "distortion_by_k=" << paths.distortion_by_k.string() << '\n'
            << "totals=" << paths.totals.string() << '\n'
            << "dispersion_grid=" << paths.dispersion_grid.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum circuit hypergraph partitioning benchmark suite"};
  app.require_subcommand(1);

  ParseArgs parse_args;
  CLI::App* parse = app.add_subcommand("parse", "Parse a QASM file and lower it to a hypergraph");
  parse->add_option("--in", parse_args.qasm_path, "OpenQASM 2.0 input file")->required();
  parse->add_option("--out", parse_args.out_path, "Write the hypergraph as an hMETIS file");

  GenerateArgs generate_args;
  CLI::App* generate = app.add_subcommand("generate", "Generate a seeded circuit as QASM");
  generate->add_option("--kind", generate_args.kind, "randu, randg, ghz, qft, qaoa or hweff")->required();
  generate->add_option("--qubits", generate_args.qubits, "Circuit width")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--depth", generate_args.depth, "Layer count (0 = kind default)");
  generate->add_option("--seed", generate_args.seed, "Generator seed (default 0)");
  generate->add_option("--out", generate_args.out_path, "Output QASM path")->required();
  generate->add_option("--two-qubit-fraction", generate_args.two_qubit_fraction,
                       "Two-qubit draw probability (randu/randg)");
  generate->add_option("--edge-probability", generate_args.edge_probability,
                       "Interaction graph edge probability (randg/qaoa)");
  generate->add_option("--layers", generate_args.layers, "Layer count for qaoa/hweff");

  PartitionArgs partition_args;
  CLI::App* partition = app.add_subcommand("partition", "Partition an hMETIS hypergraph");
  partition->add_option("--in", partition_args.hmetis_path, "hMETIS input file")->required();
  partition->add_option("--strategy", partition_args.strategy, "random, greedy, stochg, fm or ea")
      ->required();
  partition->add_option("--k", partition_args.k, "Number of blocks")->required()->check(CLI::PositiveNumber);
  partition->add_option("--epsilon", partition_args.epsilon, "Imbalance tolerance (default 0.05)");
  partition->add_option("--seed", partition_args.seed, "Strategy seed (default 0)");
  partition->add_option("--iterations", partition_args.iterations,
                        "Fixed restart count for stochg (otherwise time budget)");
  partition->add_option("--budget-ms", partition_args.budget_ms, "Time budget for stochg");
  partition->add_option("--assignment-out", partition_args.assignment_out,
                        "Write the vertex-to-block assignment file");

  std::string config_path;
  CLI::App* bench = app.add_subcommand("bench", "Run the benchmark sweep from a config file");
  bench->add_option("--config", config_path, "Config file")->required();

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "Aggregate a results CSV");
  analyze->add_option("--results", analyze_args.results_path, "results.csv from bench")->required();
  analyze->add_option("--reference", analyze_args.reference, "Reference origin (real, random, generated)")
      ->required();
  analyze->add_option("--out", analyze_args.out_dir, "Output directory (default: alongside results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(parse_args);
    if (generate->parsed()) return cmd_generate(generate_args);
    if (partition->parsed()) {
      qpart::StrategyRegistry registry;
      if (!registry.has(partition_args.strategy)) {
        std::cerr << "unknown strategy '" << partition_args.strategy << "'\n";
        return kExitUsage;
      }
      return cmd_partition(partition_args);
    }
    if (bench->parsed()) return cmd_bench(config_path);
    if (analyze->parsed()) return cmd_analyze(analyze_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
