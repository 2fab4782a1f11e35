#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpart/circuit.hpp"
#include "qpart/qasm.hpp"
#include "qpart/rng.hpp"

namespace qpart {

// Two seeded random families (Random origin) and four structured algorithm
// templates standing in for the Generated origin.
enum class GenKind { RandomUniform, RandomGraph, Ghz, Qft, QaoaMaxcut, HardwareEfficient };

inline std::string kind_name(GenKind kind) {
  switch (kind) {
    case GenKind::RandomUniform: return "randu";
    case GenKind::RandomGraph: return "randg";
    case GenKind::Ghz: return "ghz";
    case GenKind::Qft: return "qft";
    case GenKind::QaoaMaxcut: return "qaoa";
    case GenKind::HardwareEfficient: return "hweff";
  }
  return "unknown";
}

inline GenKind kind_from_string(const std::string& s) {
  if (s == "randu") return GenKind::RandomUniform;
  if (s == "randg") return GenKind::RandomGraph;
  if (s == "ghz") return GenKind::Ghz;
  if (s == "qft") return GenKind::Qft;
  if (s == "qaoa") return GenKind::QaoaMaxcut;
  if (s == "hweff") return GenKind::HardwareEfficient;
  throw std::invalid_argument("unknown generator kind '" + s + "' (expected randu, randg, ghz, qft, qaoa or hweff)");
}

struct GenSpec {
  GenKind kind = GenKind::Ghz;
  int num_qubits = 1;
  // Layer count. 0 picks the kind default: num_qubits for randu/randg,
  // 1 for qaoa, 2 for hweff; ghz/qft have fixed shape.
  int depth = 0;
  std::uint64_t seed = 0;
  // Kind-specific knobs: two_qubit_fraction (randu/randg),
  // edge_probability (randg/qaoa), layers (qaoa/hweff, overrides depth).
  std::map<std::string, double> extra;
};

struct GenResult {
  Circuit circuit;
  // Problem/interaction graph for the graph-driven kinds (randg, qaoa);
  // every multi-qubit gate is confined to these pairs.
  std::vector<std::pair<int, int>> interaction_edges;
};

namespace detail {

inline double extra_or(const GenSpec& spec, const std::string& key, double fallback) {
  auto it = spec.extra.find(key);
  return it == spec.extra.end() ? fallback : it->second;
}

inline int resolved_layers(const GenSpec& spec, int kind_default) {
  double layers = extra_or(spec, "layers", spec.depth > 0 ? spec.depth : kind_default);
  if (layers < 1 || layers != std::floor(layers))
    throw std::invalid_argument("generator layers must be a positive integer");
  return static_cast<int>(layers);
}

inline void validate_gen_spec(const GenSpec& spec) {
  if (spec.num_qubits < 1) throw std::invalid_argument("generator num_qubits must be >= 1");
  if (spec.depth < 0) throw std::invalid_argument("generator depth must be >= 0");
  for (const char* key : {"two_qubit_fraction", "edge_probability"}) {
    auto it = spec.extra.find(key);
    if (it != spec.extra.end() && !(it->second >= 0.0 && it->second <= 1.0))
      throw std::invalid_argument(std::string("generator ") + key + " must be in [0,1]");
  }
  for (const auto& [key, value] : spec.extra)
    if (key != "two_qubit_fraction" && key != "edge_probability" && key != "layers")
      throw std::invalid_argument("unknown generator parameter '" + key + "'");
}

inline void add_random_single(Circuit& c, int q, SplitMix64& rng) {
  static const char* fixed[] = {"h", "x", "y", "z", "s", "t"};
  static const char* rotations[] = {"rx", "ry", "rz"};
  int pick = static_cast<int>(rng.bounded(9));
  if (pick < 6)
    c.gates.push_back({fixed[pick], {q}, {}});
  else
    c.gates.push_back({rotations[pick - 6], {q}, {rng.uniform01() * 2.0 * M_PI}});
}

inline std::vector<std::pair<int, int>> sample_graph(int n, double p, SplitMix64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n - 1; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p)) edges.emplace_back(u, v);
  return edges;
}

}  // namespace detail

inline GenResult generate_detailed(const GenSpec& spec) {
  detail::validate_gen_spec(spec);
  const int n = spec.num_qubits;
  GenResult result;
  Circuit& c = result.circuit;
  c.num_qubits = n;
  SplitMix64 rng(mix_seed(spec.seed, kind_name(spec.kind)));

  switch (spec.kind) {
    case GenKind::RandomUniform: {
      c.origin = Origin::Random;
      const double two_qubit = detail::extra_or(spec, "two_qubit_fraction", 0.66);
      const int layers = spec.depth > 0 ? spec.depth : n;
      static const char* pair_gates[] = {"cx", "cz", "swap"};
      for (int layer = 0; layer < layers; ++layer) {
        std::vector<int> free(n);
        for (int q = 0; q < n; ++q) free[q] = q;
        while (!free.empty()) {
          int q = free.front();
          bool two = rng.chance(two_qubit) && free.size() >= 2;
          if (two) {
            std::size_t pick = 1 + rng.bounded(free.size() - 1);
            int partner = free[pick];
            c.gates.push_back({pair_gates[rng.bounded(3)], {q, partner}, {}});
            free.erase(free.begin() + pick);
            free.erase(free.begin());
          } else {
            detail::add_random_single(c, q, rng);
            free.erase(free.begin());
          }
        }
      }
      break;
    }
    case GenKind::RandomGraph: {
      c.origin = Origin::Random;
      const double p = detail::extra_or(spec, "edge_probability", 0.3);
      const double two_qubit = detail::extra_or(spec, "two_qubit_fraction", 0.5);
      const int layers = spec.depth > 0 ? spec.depth : n;
      result.interaction_edges = detail::sample_graph(n, p, rng);
      std::vector<std::vector<int>> neighbors(n);
      for (auto [u, v] : result.interaction_edges) {
        neighbors[u].push_back(v);
        neighbors[v].push_back(u);
      }
      std::vector<char> is_free(n);
      for (int layer = 0; layer < layers; ++layer) {
        std::fill(is_free.begin(), is_free.end(), 1);
        int remaining = n;
        for (int q = 0; q < n && remaining > 0; ++q) {
          if (!is_free[q]) continue;
          bool two = rng.chance(two_qubit);
          std::vector<int> candidates;
          for (int v : neighbors[q])
            if (is_free[v]) candidates.push_back(v);
          if (two && !candidates.empty()) {
            int partner = candidates[rng.bounded(candidates.size())];
            c.gates.push_back({"cx", {q, partner}, {}});
            is_free[q] = is_free[partner] = 0;
            remaining -= 2;
          } else {
            detail::add_random_single(c, q, rng);
            is_free[q] = 0;
            --remaining;
          }
        }
      }
      break;
    }
    case GenKind::Ghz: {
      c.origin = Origin::Generated;
      c.gates.push_back({"h", {0}, {}});
      for (int q = 0; q + 1 < n; ++q) c.gates.push_back({"cx", {q, q + 1}, {}});
      break;
    }
    case GenKind::Qft: {
      c.origin = Origin::Generated;
      for (int i = 0; i < n; ++i) {
        c.gates.push_back({"h", {i}, {}});
        for (int d = 1; i + d < n; ++d)
          c.gates.push_back({"cp", {i + d, i}, {(1.0 * M_PI) / std::ldexp(1.0, d)}});
      }
      for (int i = 0; i < n / 2; ++i) c.gates.push_back({"swap", {i, n - 1 - i}, {}});
      break;
    }
    case GenKind::QaoaMaxcut: {
      c.origin = Origin::Generated;
      const double p = detail::extra_or(spec, "edge_probability", 0.3);
      const int layers = detail::resolved_layers(spec, 1);
      result.interaction_edges = detail::sample_graph(n, p, rng);
      for (int q = 0; q < n; ++q) c.gates.push_back({"h", {q}, {}});
      for (int layer = 0; layer < layers; ++layer) {
        double gamma = rng.uniform01() * 2.0 * M_PI;
        double beta = rng.uniform01() * M_PI;
        for (auto [u, v] : result.interaction_edges) c.gates.push_back({"cp", {u, v}, {gamma}});
        for (int q = 0; q < n; ++q) c.gates.push_back({"rx", {q}, {beta}});
      }
      break;
    }
    case GenKind::HardwareEfficient: {
      c.origin = Origin::Generated;
      const int layers = detail::resolved_layers(spec, 2);
      for (int layer = 0; layer < layers; ++layer) {
        for (int q = 0; q < n; ++q) {
          c.gates.push_back({"ry", {q}, {rng.uniform01() * 2.0 * M_PI}});
          c.gates.push_back({"rz", {q}, {rng.uniform01() * 2.0 * M_PI}});
        }
        for (int q = 0; q + 1 < n; ++q) c.gates.push_back({"cx", {q, q + 1}, {}});
      }
      break;
    }
  }
  validate(c);
  return result;
}

inline Circuit generate(const GenSpec& spec) { return generate_detailed(spec).circuit; }

struct SuiteEntry {
  GenKind kind = GenKind::Ghz;
  int n_min = 1;
  int n_max = 1;
  int n_step = 1;
  int seeds = 1;
  int depth = 0;
  std::map<std::string, double> extra;
};

using SuiteManifest = std::vector<SuiteEntry>;

inline void validate(const SuiteEntry& e) {
  if (e.n_min < 1 || e.n_max < e.n_min) throw std::invalid_argument("suite entry: bad qubit range");
  if (e.n_step < 1) throw std::invalid_argument("suite entry: n_step must be >= 1");
  if (e.seeds < 1) throw std::invalid_argument("suite entry: seeds must be >= 1");
}

// Materializes the manifest deterministically: ids "{kind}-n{n}-s{seed}",
// in manifest order, sizes ascending, seeds 0..seeds-1. When a directory is
// given, every circuit is also written there as "<id>.qasm".
inline std::vector<Circuit> generate_suite(const SuiteManifest& manifest,
                                           const std::optional<std::filesystem::path>& dir = std::nullopt) {
  if (dir) std::filesystem::create_directories(*dir);
  std::vector<Circuit> circuits;
  for (const SuiteEntry& entry : manifest) {
    validate(entry);
    for (int n = entry.n_min; n <= entry.n_max; n += entry.n_step) {
      for (int seed = 0; seed < entry.seeds; ++seed) {
        GenSpec spec{entry.kind, n, entry.depth, static_cast<std::uint64_t>(seed), entry.extra};
        Circuit c = generate(spec);
        c.id = kind_name(entry.kind) + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
        if (dir) {
          std::ofstream out(*dir / (c.id + ".qasm"));
          out << write_qasm(c);
          if (!out) throw std::runtime_error("cannot write QASM file for " + c.id);
        }
        circuits.push_back(std::move(c));
      }
    }
  }
  return circuits;
}

}  // namespace qpart
