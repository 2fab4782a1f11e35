#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpart/circuit.hpp"

namespace qpart {

using Weight = std::int64_t;

// One hyperedge: distinct vertex ids sorted ascending, with a positive
// multiplicity. Identical pin sets are always merged into one edge.
struct Hyperedge {
  std::vector<int> pins;
  Weight weight = 1;

  bool operator==(const Hyperedge&) const = default;
};

struct Hypergraph {
  int num_vertices = 0;
  std::vector<Hyperedge> edges;

  bool operator==(const Hypergraph&) const = default;
};

inline void validate(const Hypergraph& h) {
  if (h.num_vertices < 1) throw std::invalid_argument("hypergraph must have at least one vertex");
  std::map<std::vector<int>, int> seen;
  for (const Hyperedge& e : h.edges) {
    if (e.pins.size() < 2) throw std::invalid_argument("hyperedge must have at least 2 pins");
    if (e.weight < 1) throw std::invalid_argument("hyperedge weight must be positive");
    for (std::size_t i = 0; i < e.pins.size(); ++i) {
      if (e.pins[i] < 0 || e.pins[i] >= h.num_vertices)
        throw std::invalid_argument("hyperedge pin out of range");
      if (i > 0 && e.pins[i - 1] >= e.pins[i])
        throw std::invalid_argument("hyperedge pins must be sorted and distinct");
    }
    if (!seen.emplace(e.pins, 1).second)
      throw std::invalid_argument("duplicate hyperedge pin set (must be merged into weight)");
  }
}

inline Weight total_edge_weight(const Hypergraph& h) {
  Weight w = 0;
  for (const Hyperedge& e : h.edges) w += e.weight;
  return w;
}

// Builds a hypergraph from raw pin sets, merging identical sets into
// weighted edges. Edge order is the first-occurrence order of each set.
inline Hypergraph make_hypergraph(int num_vertices, const std::vector<std::vector<int>>& pin_sets) {
  Hypergraph h;
  h.num_vertices = num_vertices;
  std::map<std::vector<int>, std::size_t> index_of;
  for (const std::vector<int>& raw : pin_sets) {
    std::vector<int> pins = raw;
    std::sort(pins.begin(), pins.end());
    auto [it, inserted] = index_of.emplace(std::move(pins), h.edges.size());
    if (inserted)
      h.edges.push_back({it->first, 1});
    else
      h.edges[it->second].weight += 1;
  }
  validate(h);
  return h;
}

// Lowers a circuit: qubits become vertices, each multi-qubit gate's qubit
// set becomes a hyperedge, repeated sets merge into weight.
inline Hypergraph circuit_to_hypergraph(const Circuit& c) {
  std::vector<std::vector<int>> pin_sets;
  for (const Gate& g : c.gates)
    if (g.qubits.size() >= 2) pin_sets.push_back(g.qubits);
  Hypergraph h = make_hypergraph(c.num_qubits, pin_sets);
  return h;
}

// Balance constraint for a k-way partition of n vertices with imbalance
// tolerance epsilon: per-block capacity floor((n/k)*(1+epsilon)) + 1.
struct PartitionSpec {
  int num_vertices = 0;
  int k = 1;
  double epsilon = 0.0;
  int max_block = 0;
};

inline PartitionSpec make_spec(int num_vertices, int k, double epsilon) {
  if (num_vertices < 1) throw std::invalid_argument("num_vertices must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  PartitionSpec spec;
  spec.num_vertices = num_vertices;
  spec.k = k;
  spec.epsilon = epsilon;
  double capacity = std::floor((static_cast<double>(num_vertices) / k) * (1.0 + epsilon)) + 1.0;
  // A capacity above n never binds; clamping keeps the field in int range
  // for degenerate tolerances.
  spec.max_block = capacity >= num_vertices ? num_vertices : static_cast<int>(capacity);
  if (static_cast<std::int64_t>(spec.k) * spec.max_block < num_vertices)
    throw std::logic_error("infeasible partition spec");  // cannot happen for epsilon >= 0
  return spec;
}

// Vertex -> block map, entry b in [0, k).
using Assignment = std::vector<int>;

struct CutReport {
  Weight cut_cost = 0;
  std::vector<int> block_sizes;
  bool balanced = true;
};

inline void validate_assignment(const Hypergraph& h, const PartitionSpec& spec, const Assignment& a) {
  if (spec.num_vertices != h.num_vertices)
    throw std::invalid_argument("partition spec was built for a different vertex count");
  if (static_cast<int>(a.size()) != h.num_vertices)
    throw std::invalid_argument("assignment length does not match vertex count");
  for (int b : a)
    if (b < 0 || b >= spec.k) throw std::invalid_argument("assignment block id out of range");
}

// Cut cost = total weight of edges whose pins span >= 2 blocks.
inline CutReport cut_report(const Hypergraph& h, const PartitionSpec& spec, const Assignment& a) {
  validate_assignment(h, spec, a);
  CutReport report;
  report.block_sizes.assign(spec.k, 0);
  for (int b : a) ++report.block_sizes[b];
  for (const Hyperedge& e : h.edges) {
    int first = a[e.pins[0]];
    for (std::size_t i = 1; i < e.pins.size(); ++i) {
      if (a[e.pins[i]] != first) {
        report.cut_cost += e.weight;
        break;
      }
    }
  }
  report.balanced = true;
  for (int size : report.block_sizes)
    if (size > spec.max_block) report.balanced = false;
  return report;
}

struct BruteForceResult {
  Assignment assignment;
  Weight cut_cost = 0;
};

namespace detail {

struct BruteForceState {
  const Hypergraph& h;
  const PartitionSpec& spec;
  std::vector<std::vector<int>> incident;   // vertex -> incident edge ids
  std::vector<std::vector<int>> pin_count;  // edge -> per-block assigned pin count
  std::vector<int> blocks_spanned;          // edge -> number of distinct blocks touched
  std::vector<int> block_sizes;
  Assignment current;
  Weight partial_cut = 0;
  Weight best_cut = 0;
  bool found = false;
  Assignment best;

  explicit BruteForceState(const Hypergraph& hg, const PartitionSpec& s) : h(hg), spec(s) {
    incident.resize(h.num_vertices);
    for (std::size_t e = 0; e < h.edges.size(); ++e)
      for (int v : h.edges[e].pins) incident[v].push_back(static_cast<int>(e));
    pin_count.assign(h.edges.size(), std::vector<int>(spec.k, 0));
    blocks_spanned.assign(h.edges.size(), 0);
    block_sizes.assign(spec.k, 0);
    current.assign(h.num_vertices, 0);
  }

  void search(int v) {
    if (found && partial_cut >= best_cut) return;  // cut only grows with more pins
    if (v == h.num_vertices) {
      if (!found || partial_cut < best_cut) {
        found = true;
        best_cut = partial_cut;
        best = current;
      }
      return;
    }
    for (int b = 0; b < spec.k; ++b) {
      if (block_sizes[b] >= spec.max_block) continue;
      current[v] = b;
      ++block_sizes[b];
      Weight delta = 0;
      for (int e : incident[v]) {
        if (pin_count[e][b]++ == 0 && ++blocks_spanned[e] == 2) delta += h.edges[e].weight;
      }
      partial_cut += delta;
      search(v + 1);
      partial_cut -= delta;
      for (int e : incident[v]) {
        if (--pin_count[e][b] == 0) --blocks_spanned[e];
      }
      --block_sizes[b];
    }
  }
};

}  // namespace detail

// Exhaustive minimum-cut search over balanced assignments. Ties resolve to
// the lexicographically smallest assignment. Guarded to k^n <= 10^7.
inline BruteForceResult brute_force_optimal(const Hypergraph& h, const PartitionSpec& spec) {
  if (spec.num_vertices != h.num_vertices)
    throw std::invalid_argument("partition spec was built for a different vertex count");
  double states = std::pow(static_cast<double>(spec.k), static_cast<double>(h.num_vertices));
  if (states > 1e7) throw std::invalid_argument("instance too large for brute-force enumeration (k^n > 1e7)");
  detail::BruteForceState state(h, spec);
  state.search(0);
  if (!state.found) throw std::logic_error("no balanced assignment exists");  // unreachable for valid specs
  return {state.best, state.best_cut};
}

}  // namespace qpart
