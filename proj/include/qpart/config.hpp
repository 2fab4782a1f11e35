#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/circuit.hpp"
#include "qpart/errors.hpp"
#include "qpart/external_solver.hpp"
#include "qpart/generators.hpp"
#include "qpart/partition.hpp"

namespace qpart {

struct SourceDir {
  std::filesystem::path dir;
  Origin origin = Origin::Real;
};

// Sweep configuration. File format: key = value lines, '#' comments,
// repeatable [source] and [generate] sections, [strategy.stochg],
// [strategy.ea] and [external.<name>] sections. Unknown keys are errors.
struct BenchConfig {
  std::vector<SourceDir> sources;
  SuiteManifest manifests;
  int k_min = 2;
  int k_max = 10;
  double epsilon = 0.05;
  int min_qubits_per_qpu = 5;
  int max_qubits = 130;
  std::int64_t max_multiqubit_gates = 20000;
  std::vector<std::string> strategies = {"random", "greedy", "stochg", "fm", "ea"};
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::filesystem::path output_dir = "bench-out";
  StochgConfig stochg;
  EaConfig ea;
  std::vector<ExternalSolverConfig> externals;
};

inline void validate(const BenchConfig& cfg) {
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min) throw ConfigError("k range is empty or invalid");
  if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (cfg.min_qubits_per_qpu < 1) throw ConfigError("min_qubits_per_qpu must be >= 1");
  if (cfg.max_qubits < 1) throw ConfigError("max_qubits must be >= 1");
  if (cfg.max_multiqubit_gates < 1) throw ConfigError("max_multiqubit_gates must be >= 1");
  if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir must be set");
  if (cfg.strategies.empty()) throw ConfigError("strategy list is empty");
}

namespace detail {

struct ConfigLine {
  int number;
  std::string text;
};

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline long long config_int(const std::string& value, const ConfigLine& line) {
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("line " + std::to_string(line.number) + ": expected integer, got '" + value + "'");
  return v;
}

inline double config_real(const std::string& value, const ConfigLine& line) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("line " + std::to_string(line.number) + ": expected number, got '" + value + "'");
  return v;
}

}  // namespace detail

inline BenchConfig parse_config(const std::string& text) {
  BenchConfig cfg;
  bool strategies_set = false;

  enum class Section { Global, Source, Generate, Stochg, Ea, External };
  Section section = Section::Global;
  SourceDir source;
  bool source_has_dir = false, source_has_origin = false;
  SuiteEntry entry;
  bool entry_has_kind = false, entry_has_min = false, entry_has_max = false;
  ExternalSolverConfig external;

  auto flush_section = [&](int line_number) {
    switch (section) {
      case Section::Source:
        if (!source_has_dir || !source_has_origin)
          throw ConfigError("line " + std::to_string(line_number) +
                            ": [source] section needs both 'dir' and 'origin'");
        cfg.sources.push_back(source);
        break;
      case Section::Generate:
        if (!entry_has_kind || !entry_has_min || !entry_has_max)
          throw ConfigError("line " + std::to_string(line_number) +
                            ": [generate] section needs 'kind', 'n_min' and 'n_max'");
        validate(entry);
        cfg.manifests.push_back(entry);
        break;
      case Section::External:
        if (external.command.empty())
          throw ConfigError("line " + std::to_string(line_number) +
                            ": [external." + external.name + "] section needs 'command'");
        cfg.externals.push_back(external);
        break;
      default:
        break;
    }
  };

  std::istringstream in(text);
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string stripped = raw.substr(0, raw.find('#'));
    std::string line = detail::trim(stripped);
    if (line.empty()) continue;
    detail::ConfigLine here{line_number, line};

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_number) + ": unterminated section");
      flush_section(line_number);
      std::string name = line.substr(1, line.size() - 2);
      if (name == "source") {
        section = Section::Source;
        source = SourceDir{};
        source_has_dir = source_has_origin = false;
      } else if (name == "generate") {
        section = Section::Generate;
        entry = SuiteEntry{};
        entry_has_kind = entry_has_min = entry_has_max = false;
      } else if (name == "strategy.stochg") {
        section = Section::Stochg;
      } else if (name == "strategy.ea") {
        section = Section::Ea;
      } else if (name.rfind("external.", 0) == 0 && name.size() > 9) {
        section = Section::External;
        external = ExternalSolverConfig{};
        external.name = name.substr(9);
      } else {
        throw ConfigError("line " + std::to_string(line_number) + ": unknown section [" + name + "]");
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");

    auto unknown_key = [&]() -> ConfigError {
      return ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    };

    switch (section) {
      case Section::Global:
        if (key == "seed")
          cfg.seed = static_cast<std::uint64_t>(detail::config_int(value, here));
        else if (key == "epsilon")
          cfg.epsilon = detail::config_real(value, here);
        else if (key == "k_min")
          cfg.k_min = static_cast<int>(detail::config_int(value, here));
        else if (key == "k_max")
          cfg.k_max = static_cast<int>(detail::config_int(value, here));
        else if (key == "min_qubits_per_qpu")
          cfg.min_qubits_per_qpu = static_cast<int>(detail::config_int(value, here));
        else if (key == "max_qubits")
          cfg.max_qubits = static_cast<int>(detail::config_int(value, here));
        else if (key == "max_multiqubit_gates")
          cfg.max_multiqubit_gates = detail::config_int(value, here);
        else if (key == "parallelism")
          cfg.parallelism = static_cast<int>(detail::config_int(value, here));
        else if (key == "output_dir")
          cfg.output_dir = value;
        else if (key == "strategies") {
          cfg.strategies.clear();
          strategies_set = true;
          std::istringstream list(value);
          std::string item;
          while (std::getline(list, item, ',')) {
            item = detail::trim(item);
            if (!item.empty()) cfg.strategies.push_back(item);
          }
        } else {
          throw unknown_key();
        }
        break;
      case Section::Source:
        if (key == "dir") {
          source.dir = value;
          source_has_dir = true;
        } else if (key == "origin") {
          source.origin = origin_from_string(value);
          source_has_origin = true;
        } else {
          throw unknown_key();
        }
        break;
      case Section::Generate:
        if (key == "kind") {
          entry.kind = kind_from_string(value);
          entry_has_kind = true;
        } else if (key == "n_min") {
          entry.n_min = static_cast<int>(detail::config_int(value, here));
          entry_has_min = true;
        } else if (key == "n_max") {
          entry.n_max = static_cast<int>(detail::config_int(value, here));
          entry_has_max = true;
        } else if (key == "n_step") {
          entry.n_step = static_cast<int>(detail::config_int(value, here));
        } else if (key == "seeds") {
          entry.seeds = static_cast<int>(detail::config_int(value, here));
        } else if (key == "depth") {
          entry.depth = static_cast<int>(detail::config_int(value, here));
        } else if (key == "two_qubit_fraction" || key == "edge_probability" || key == "layers") {
          entry.extra[key] = detail::config_real(value, here);
        } else {
          throw unknown_key();
        }
        break;
      case Section::Stochg:
        if (key == "iterations")
          cfg.stochg.iterations = static_cast<std::uint64_t>(detail::config_int(value, here));
        else if (key == "budget_ms")
          cfg.stochg.budget_ms = detail::config_int(value, here);
        else
          throw unknown_key();
        break;
      case Section::Ea:
        if (key == "population")
          cfg.ea.population_size = static_cast<int>(detail::config_int(value, here));
        else if (key == "generations")
          cfg.ea.generations = static_cast<int>(detail::config_int(value, here));
        else if (key == "tournament")
          cfg.ea.tournament_size = static_cast<int>(detail::config_int(value, here));
        else if (key == "mutation_rate")
          cfg.ea.mutation_rate = detail::config_real(value, here);
        else if (key == "elite")
          cfg.ea.elite_count = static_cast<int>(detail::config_int(value, here));
        else
          throw unknown_key();
        break;
      case Section::External:
        if (key == "command")
          external.command = value;
        else if (key == "timeout_ms")
          external.timeout_ms = detail::config_int(value, here);
        else
          throw unknown_key();
        break;
    }
  }
  flush_section(line_number + 1);
  if (strategies_set && cfg.strategies.empty()) throw ConfigError("strategy list is empty");
  validate(cfg);
  validate(cfg.ea);
  return cfg;
}

inline BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace qpart
