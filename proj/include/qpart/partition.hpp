#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qpart/hypergraph.hpp"
#include "qpart/rng.hpp"

namespace qpart {

struct PartitionRequest {
  const Hypergraph& hypergraph;
  PartitionSpec spec;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> budget_ms;
};

struct PartitionOutcome {
  Assignment assignment;
  CutReport report;
  std::string strategy;
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void validate_request(const PartitionRequest& req) {
  if (req.spec.num_vertices != req.hypergraph.num_vertices)
    throw std::invalid_argument("partition spec does not match hypergraph vertex count");
}

inline PartitionOutcome make_outcome(std::string strategy, const PartitionRequest& req, Assignment a,
                                     std::chrono::steady_clock::time_point t0) {
  PartitionOutcome out;
  out.report = cut_report(req.hypergraph, req.spec, a);  // always recomputed from scratch
  out.assignment = std::move(a);
  out.strategy = std::move(strategy);
  out.seed = req.seed;
  out.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// Per-edge, per-block pin counts with O(pins-of-v) move gains. This is the
// incremental engine behind FM and the StochG improvement sweep; tests
// cross-check it against full cut recomputation.
class PinCountTable {
 public:
  PinCountTable(const Hypergraph& h, const PartitionSpec& spec, Assignment a)
      : h_(&h), k_(spec.k), assignment_(std::move(a)) {
    counts_.assign(h.edges.size() * static_cast<std::size_t>(k_), 0);
    spanned_.assign(h.edges.size(), 0);
    sizes_.assign(k_, 0);
    incident_.resize(h.num_vertices);
    for (int b : assignment_) ++sizes_[b];
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      for (int v : h.edges[e].pins) {
        incident_[v].push_back(static_cast<int>(e));
        if (count(e, assignment_[v])++ == 0) ++spanned_[e];
      }
      if (spanned_[e] >= 2) cut_ += h.edges[e].weight;
    }
  }

  Weight cut() const { return cut_; }
  const Assignment& assignment() const { return assignment_; }
  const std::vector<int>& block_sizes() const { return sizes_; }

  // Cut-weight decrease if v moves from its current block to `target`.
  Weight gain(int v, int target) const {
    int from = assignment_[v];
    Weight g = 0;
    for (int e : incident_[v]) {
      const Hyperedge& edge = (*h_).edges[e];
      int pins = static_cast<int>(edge.pins.size());
      if (count(e, target) + 1 == pins) g += edge.weight;  // becomes uncut
      if (count(e, from) == pins) g -= edge.weight;        // becomes cut
    }
    return g;
  }

  void move(int v, int target) {
    int from = assignment_[v];
    for (int e : incident_[v]) {
      if (--count(e, from) == 0 && --spanned_[e] == 1) cut_ -= (*h_).edges[e].weight;
      if (count(e, target)++ == 0 && ++spanned_[e] == 2) cut_ += (*h_).edges[e].weight;
    }
    --sizes_[from];
    ++sizes_[target];
    assignment_[v] = target;
  }

 private:
  int& count(std::size_t e, int b) { return counts_[e * static_cast<std::size_t>(k_) + b]; }
  int count(std::size_t e, int b) const { return counts_[e * static_cast<std::size_t>(k_) + b]; }

  const Hypergraph* h_;
  int k_;
  Assignment assignment_;
  std::vector<int> sizes_;
  std::vector<int> counts_;
  std::vector<int> spanned_;
  std::vector<std::vector<int>> incident_;
  Weight cut_ = 0;
};

inline int least_loaded_with_spare(const std::vector<int>& sizes, int max_block) {
  int chosen = -1;
  for (int b = 0; b < static_cast<int>(sizes.size()); ++b)
    if (sizes[b] < max_block && (chosen < 0 || sizes[b] < sizes[chosen])) chosen = b;
  if (chosen < 0) throw std::logic_error("no block with spare capacity");
  return chosen;
}

// Single-pass plurality construction over the given edge order. Within an
// edge, pins assigned earlier vote for the pins that follow.
inline Assignment greedy_construct(const Hypergraph& h, const PartitionSpec& spec,
                                   const std::vector<int>& edge_order) {
  const int k = spec.k;
  Assignment a(h.num_vertices, -1);
  std::vector<int> sizes(k, 0);
  std::vector<int> votes(k, 0);
  for (int e : edge_order) {
    const Hyperedge& edge = h.edges[e];
    std::fill(votes.begin(), votes.end(), 0);
    for (int v : edge.pins)
      if (a[v] >= 0) ++votes[a[v]];
    for (int v : edge.pins) {
      if (a[v] >= 0) continue;
      int max_votes = *std::max_element(votes.begin(), votes.end());
      int chosen = -1;
      if (max_votes == 0) {
        chosen = least_loaded_with_spare(sizes, spec.max_block);
      } else {
        for (int b = 0; b < k; ++b)
          if (votes[b] == max_votes && (chosen < 0 || sizes[b] < sizes[chosen])) chosen = b;
        if (sizes[chosen] >= spec.max_block) chosen = least_loaded_with_spare(sizes, spec.max_block);
      }
      a[v] = chosen;
      ++sizes[chosen];
      ++votes[chosen];
    }
  }
  for (int v = 0; v < h.num_vertices; ++v)
    if (a[v] < 0) {
      int chosen = least_loaded_with_spare(sizes, spec.max_block);
      a[v] = chosen;
      ++sizes[chosen];
    }
  return a;
}

// Best-improvement sweeps in vertex index order; a vertex moves only when
// the best capacity-respecting move strictly reduces the cut. Repeats until
// a full sweep makes no move.
inline void local_improve(PinCountTable& table, const PartitionSpec& spec) {
  const int n = spec.num_vertices;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int v = 0; v < n; ++v) {
      int current = table.assignment()[v];
      Weight best_gain = 0;
      int best_block = -1;
      for (int b = 0; b < spec.k; ++b) {
        if (b == current || table.block_sizes()[b] >= spec.max_block) continue;
        Weight g = table.gain(v, b);
        if (g > best_gain) {
          best_gain = g;
          best_block = b;
        }
      }
      if (best_block >= 0) {
        table.move(v, best_block);
        moved = true;
      }
    }
  }
}

}  // namespace detail

// Uniform i.i.d. block per vertex. Structure-blind baseline; deliberately
// not balance-constrained.
inline PartitionOutcome partition_random(const PartitionRequest& req) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  SplitMix64 rng(mix_seed(req.seed, "random"));
  Assignment a(req.hypergraph.num_vertices);
  for (int& b : a) b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(req.spec.k)));
  return detail::make_outcome("random", req, std::move(a), t0);
}

// Deterministic single-pass plurality placement over stored edge order.
inline PartitionOutcome partition_greedy(const PartitionRequest& req) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  std::vector<int> order(req.hypergraph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  return detail::make_outcome("greedy", req, detail::greedy_construct(req.hypergraph, req.spec, order), t0);
}

struct StochgConfig {
  // Fixed restart count; when unset the wall-clock budget applies.
  std::optional<std::uint64_t> iterations;
  // Wall-clock budget when iterations is unset; the request's budget_ms
  // takes precedence, and 1000 ms is the final default.
  std::optional<std::int64_t> budget_ms;
};

// Randomized greedy restarts with local improvement; keeps the best cut
// found. At least one iteration always runs.
inline PartitionOutcome partition_stoch_greedy(const PartitionRequest& req, const StochgConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  SplitMix64 rng(mix_seed(req.seed, "stochg"));
  const auto deadline =
      t0 + std::chrono::milliseconds(req.budget_ms ? *req.budget_ms : cfg.budget_ms.value_or(1000));

  std::vector<int> order(req.hypergraph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  Assignment best;
  Weight best_cut = 0;
  bool have_best = false;
  std::uint64_t iteration = 0;
  while (true) {
    rng.shuffle(order);
    detail::PinCountTable table(req.hypergraph, req.spec,
                                detail::greedy_construct(req.hypergraph, req.spec, order));
    detail::local_improve(table, req.spec);
    if (!have_best || table.cut() < best_cut) {
      have_best = true;
      best_cut = table.cut();
      best = table.assignment();
    }
    ++iteration;
    if (cfg.iterations ? iteration >= *cfg.iterations
                       : std::chrono::steady_clock::now() >= deadline)
      break;
  }
  return detail::make_outcome("stochg", req, std::move(best), t0);
}

// k-way Fiduccia-Mattheyses refinement from a round-robin start: passes of
// highest-gain single moves with per-pass vertex locking and rollback to the
// best prefix; stops when a pass brings no strict improvement.
inline PartitionOutcome partition_fm(const PartitionRequest& req) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  const Hypergraph& h = req.hypergraph;
  const int n = h.num_vertices;
  Assignment initial(n);
  for (int v = 0; v < n; ++v) initial[v] = v % req.spec.k;
  detail::PinCountTable table(h, req.spec, std::move(initial));

  struct Move {
    int v;
    int from;
  };
  std::vector<char> locked(n);
  std::vector<Move> moves;
  while (true) {
    std::fill(locked.begin(), locked.end(), 0);
    moves.clear();
    const Weight pass_start_cut = table.cut();
    Weight best_cut = pass_start_cut;
    std::size_t best_prefix = 0;
    while (true) {
      bool found = false;
      Weight best_gain = 0;
      int best_v = -1, best_b = -1;
      for (int v = 0; v < n; ++v) {
        if (locked[v]) continue;
        int current = table.assignment()[v];
        for (int b = 0; b < req.spec.k; ++b) {
          if (b == current || table.block_sizes()[b] >= req.spec.max_block) continue;
          Weight g = table.gain(v, b);
          if (!found || g > best_gain) {  // ties keep lowest (v, b): scan order
            found = true;
            best_gain = g;
            best_v = v;
            best_b = b;
          }
        }
      }
      if (!found) break;
      moves.push_back({best_v, table.assignment()[best_v]});
      table.move(best_v, best_b);
      locked[best_v] = 1;
      if (table.cut() < best_cut) {
        best_cut = table.cut();
        best_prefix = moves.size();
      }
    }
    for (std::size_t i = moves.size(); i > best_prefix; --i) table.move(moves[i - 1].v, moves[i - 1].from);
    if (best_cut >= pass_start_cut) break;
  }
  return detail::make_outcome("fm", req, table.assignment(), t0);
}

struct EaConfig {
  int population_size = 32;
  int generations = 200;
  int tournament_size = 3;
  double mutation_rate = 0.05;
  int elite_count = 2;
};

inline void validate(const EaConfig& cfg) {
  if (cfg.population_size < 2) throw std::invalid_argument("ea: population_size must be >= 2");
  if (cfg.generations < 0) throw std::invalid_argument("ea: generations must be >= 0");
  if (cfg.tournament_size < 2) throw std::invalid_argument("ea: tournament_size must be >= 2");
  if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0))
    throw std::invalid_argument("ea: mutation_rate must be in [0,1]");
  if (cfg.elite_count < 0 || cfg.elite_count >= cfg.population_size)
    throw std::invalid_argument("ea: elite_count must be < population_size");
}

// f = cut_weight + n * sum_b max(0, |b| - max_block). Zero penalty for any
// balanced assignment, so fitness of a repaired individual is its cut.
inline Weight ea_fitness(Weight cut_weight, int num_vertices, const std::vector<int>& block_sizes,
                         int max_block) {
  Weight penalty = 0;
  for (int size : block_sizes) penalty += std::max(0, size - max_block);
  return cut_weight + static_cast<Weight>(num_vertices) * penalty;
}

// Uniformly random balanced assignment: vertices in shuffled order each pick
// a uniformly random block with spare capacity.
inline Assignment balanced_random_assignment(const PartitionSpec& spec, SplitMix64& rng) {
  Assignment a(spec.num_vertices, -1);
  std::vector<int> order(spec.num_vertices);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> sizes(spec.k, 0);
  for (int v : order) {
    int spare = 0;
    for (int b = 0; b < spec.k; ++b)
      if (sizes[b] < spec.max_block) ++spare;
    int pick = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(spare)));
    for (int b = 0; b < spec.k; ++b) {
      if (sizes[b] >= spec.max_block) continue;
      if (pick-- == 0) {
        a[v] = b;
        ++sizes[b];
        break;
      }
    }
  }
  return a;
}

namespace detail {

inline void ea_repair(Assignment& a, std::vector<int>& sizes, const PartitionSpec& spec) {
  while (true) {
    int worst = -1;
    for (int b = 0; b < spec.k; ++b)
      if (sizes[b] > spec.max_block && (worst < 0 || sizes[b] > sizes[worst])) worst = b;
    if (worst < 0) return;
    int victim = -1;
    for (int v = 0; v < spec.num_vertices; ++v)
      if (a[v] == worst) {
        victim = v;
        break;
      }
    int target = 0;
    for (int b = 1; b < spec.k; ++b)
      if (sizes[b] < sizes[target]) target = b;
    a[victim] = target;
    --sizes[worst];
    ++sizes[target];
  }
}

}  // namespace detail

// Generational EA: tournament selection, uniform partition crossover with
// capacity repair, per-vertex mutation into blocks with spare capacity, and
// elitism. Population seeds: round-robin, greedy, random balanced.
inline PartitionOutcome partition_ea(const PartitionRequest& req, const EaConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  detail::validate_request(req);
  validate(cfg);
  const Hypergraph& h = req.hypergraph;
  const PartitionSpec& spec = req.spec;
  const int n = h.num_vertices;
  SplitMix64 rng(mix_seed(req.seed, "ea"));

  struct Individual {
    Assignment a;
    Weight fitness;
  };
  auto evaluate = [&](const Assignment& a) {
    CutReport r = cut_report(h, spec, a);
    return ea_fitness(r.cut_cost, n, r.block_sizes, spec.max_block);
  };

  std::vector<Individual> population;
  population.reserve(cfg.population_size);
  Assignment round_robin(n);
  for (int v = 0; v < n; ++v) round_robin[v] = v % spec.k;
  population.push_back({round_robin, evaluate(round_robin)});
  if (cfg.population_size > 1) {
    std::vector<int> order(h.edges.size());
    std::iota(order.begin(), order.end(), 0);
    Assignment greedy = detail::greedy_construct(h, spec, order);
    population.push_back({greedy, evaluate(greedy)});
  }
  while (static_cast<int>(population.size()) < cfg.population_size) {
    Assignment a = balanced_random_assignment(spec, rng);
    population.push_back({a, evaluate(a)});
  }
  auto by_fitness = [](const Individual& x, const Individual& y) { return x.fitness < y.fitness; };
  std::stable_sort(population.begin(), population.end(), by_fitness);

  auto tournament = [&]() -> const Individual& {
    std::size_t winner = rng.bounded(population.size());
    for (int i = 1; i < cfg.tournament_size; ++i) {
      std::size_t challenger = rng.bounded(population.size());
      if (population[challenger].fitness < population[winner].fitness) winner = challenger;
    }
    return population[winner];
  };

  std::vector<int> sizes(spec.k);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Individual> next(population.begin(), population.begin() + cfg.elite_count);
    while (static_cast<int>(next.size()) < cfg.population_size) {
      const Assignment& pa = tournament().a;
      const Assignment& pb = tournament().a;
      Assignment child(n);
      std::fill(sizes.begin(), sizes.end(), 0);
      for (int v = 0; v < n; ++v) {
        child[v] = rng.bounded(2) == 0 ? pa[v] : pb[v];
        ++sizes[child[v]];
      }
      detail::ea_repair(child, sizes, spec);
      for (int v = 0; v < n; ++v) {
        if (!rng.chance(cfg.mutation_rate)) continue;
        --sizes[child[v]];
        int spare = 0;
        for (int b = 0; b < spec.k; ++b)
          if (sizes[b] < spec.max_block) ++spare;
        int pick = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(spare)));
        for (int b = 0; b < spec.k; ++b) {
          if (sizes[b] >= spec.max_block) continue;
          if (pick-- == 0) {
            child[v] = b;
            break;
          }
        }
        ++sizes[child[v]];
      }
      next.push_back({child, evaluate(child)});
    }
    population = std::move(next);
    std::stable_sort(population.begin(), population.end(), by_fitness);
  }
  return detail::make_outcome("ea", req, population.front().a, t0);
}

}  // namespace qpart
