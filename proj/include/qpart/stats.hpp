#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpart/bench_record.hpp"

namespace qpart {

// Strategy whose rows form the normalization baseline of each (circuit, k)
// group and which rankings exclude.
inline constexpr const char* kBaselineStrategy = "random";

using Sample = std::vector<double>;

namespace detail {

inline std::vector<double> midranks(const Sample& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

// Number of n1-subsets of ranks {1..n1+n2} attaining each U value.
// ways[j][u] counts ways to pick j ranks among the first i processed with
// pair-count u; taking rank i as the j-th member of the first sample
// contributes (i - j) pairs (second-sample ranks below it).
inline std::vector<double> mwu_exact_counts(int n1, int n2) {
  const int max_u = n1 * n2;
  std::vector<std::vector<double>> ways(static_cast<std::size_t>(n1) + 1,
                                        std::vector<double>(max_u + 1, 0.0));
  ways[0][0] = 1.0;
  for (int i = 1; i <= n1 + n2; ++i)
    for (int j = std::min(i, n1); j >= 1; --j)
      for (int u = max_u; u >= 0; --u) {
        int add = i - j;
        if (u >= add) ways[j][u] += ways[j - 1][u - add];
      }
  return ways[n1];
}

inline double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

inline double quantile_linear(std::vector<double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

inline double interquartile_range(Sample values) {
  if (values.size() < 2) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile_linear(values, 0.75) - quantile_linear(values, 0.25);
}

inline double sample_variance(const Sample& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

inline double mean_of(const Sample& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace detail

enum class MwuMethod { Exact, NormalApprox };

struct MwuResult {
  double u_statistic = 0.0;    // U of the first sample (rank-sum form)
  double p_value = 1.0;        // two-sided
  double rank_biserial = 0.0;  // 1 - 2U/(n1*n2)
  MwuMethod method = MwuMethod::Exact;
};

// Tie-aware Mann-Whitney U. U is the first sample's statistic computed from
// midranks; rank_biserial = 1 - 2U/(n1*n2), so +1 means the first sample is
// entirely below the second. Exact two-sided p by full enumeration for
// n1+n2 <= 12 without ties; otherwise a normal approximation with
// tie-corrected variance and continuity correction.
inline MwuResult mann_whitney_u(const Sample& a, const Sample& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
  const int n1 = static_cast<int>(a.size());
  const int n2 = static_cast<int>(b.size());
  Sample pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double v : pooled)
    if (!std::isfinite(v)) throw std::invalid_argument("mann_whitney_u: non-finite value");
  std::vector<double> ranks = detail::midranks(pooled);

  double r1 = 0.0;
  for (int i = 0; i < n1; ++i) r1 += ranks[i];
  const double u1 = r1 - static_cast<double>(n1) * (n1 + 1) / 2.0;
  const double max_u = static_cast<double>(n1) * n2;

  // tie group sizes
  Sample sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  bool has_ties = false;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    if (t > 1) {
      has_ties = true;
      tie_term += t * t * t - t;
    }
    i = j + 1;
  }

  MwuResult result;
  result.u_statistic = u1;
  result.rank_biserial = 1.0 - 2.0 * u1 / max_u;

  if (n1 + n2 <= 12 && !has_ties) {
    result.method = MwuMethod::Exact;
    std::vector<double> counts = detail::mwu_exact_counts(n1, n2);
    double total = 0.0;
    for (double c : counts) total += c;
    const int u_int = static_cast<int>(std::llround(u1));
    const int lo = std::min(u_int, n1 * n2 - u_int);
    const int hi = n1 * n2 - lo;
    double favorable = 0.0;
    if (hi <= lo) {
      favorable = total;
    } else {
      for (int u = 0; u <= lo; ++u) favorable += counts[u];
      for (int u = hi; u <= n1 * n2; ++u) favorable += counts[u];
    }
    result.p_value = favorable / total;
  } else {
    result.method = MwuMethod::NormalApprox;
    const double big_n = static_cast<double>(n1 + n2);
    double variance = (max_u / 12.0) * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (variance <= 0.0) {
      result.p_value = 1.0;
    } else {
      double numerator = std::max(0.0, std::fabs(u1 - max_u / 2.0) - 0.5);
      result.p_value = detail::normal_two_sided_p(numerator / std::sqrt(variance));
    }
  }
  return result;
}

struct SpearmanResult {
  double rho = 0.0;
  int n = 0;
};

// Pearson correlation of midranks; the tie-safe generalization of
// 1 - 6*sum(d^2)/(n(n^2-1)).
inline SpearmanResult spearman_rho(const Sample& x, const Sample& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman_rho: need at least 2 items");
  std::vector<double> rx = detail::midranks(x);
  std::vector<double> ry = detail::midranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("spearman_rho: ranking has zero variance");
  return {sxy / std::sqrt(sxx * syy), static_cast<int>(x.size())};
}

// Fills per_qubit, rel_to_baseline and the degenerate flag from each
// (circuit, k) group's random-baseline row. A zero-cut baseline makes the
// whole group degenerate: rel is 1 for zero-cut rows, +inf otherwise, and
// such rows are excluded from every rel mean but counted.
inline void normalized_costs(std::vector<BenchRecord>& records) {
  std::map<std::pair<std::string, int>, Weight> baseline;
  for (const BenchRecord& r : records) {
    if (!r.ok() || r.strategy != kBaselineStrategy) continue;
    auto key = std::make_pair(r.circuit_id, r.k);
    if (!baseline.emplace(key, r.cut_cost).second)
      throw std::invalid_argument("duplicate random-baseline row for circuit '" + r.circuit_id +
                                  "', k=" + std::to_string(r.k));
  }
  for (BenchRecord& r : records) {
    if (!r.ok()) continue;
    auto it = baseline.find({r.circuit_id, r.k});
    if (it == baseline.end())
      throw std::invalid_argument("missing random-baseline row for circuit '" + r.circuit_id +
                                  "', k=" + std::to_string(r.k));
    r.per_qubit = static_cast<double>(r.cut_cost) / r.n_qubits;
    if (it->second > 0) {
      r.rel_to_baseline = static_cast<double>(r.cut_cost) / static_cast<double>(it->second);
      r.degenerate = false;
    } else {
      r.rel_to_baseline =
          r.cut_cost == 0 ? 1.0 : std::numeric_limits<double>::infinity();
      r.degenerate = true;
    }
  }
}

enum class GroupBy { K, QubitBin };

// One group's strategy ordering, best (lowest mean rel_to_baseline) first.
struct RankTable {
  std::string origin;
  std::string key_name;  // "k" or "qubit_bin"
  int key_value = 0;
  std::vector<std::string> ranking;
  std::vector<double> mean_rel;       // aligned with ranking
  std::vector<double> mean_per_qubit; // aligned with ranking
  std::int64_t degenerate_rows = 0;
};

inline std::vector<RankTable> rank_strategies(const std::vector<BenchRecord>& records, GroupBy by,
                                              int bin_width = 15) {
  if (bin_width < 1) throw std::invalid_argument("rank_strategies: bin_width must be >= 1");
  struct Cell {
    Sample rel;
    Sample per_qubit;
    std::int64_t degenerate = 0;
  };
  std::map<std::pair<std::string, int>, std::map<std::string, Cell>> groups;
  for (const BenchRecord& r : records) {
    if (!r.ok() || r.strategy == kBaselineStrategy) continue;
    int key = by == GroupBy::K ? r.k : (r.n_qubits / bin_width) * bin_width;
    Cell& cell = groups[{to_string(r.origin), key}][r.strategy];
    cell.per_qubit.push_back(r.per_qubit);
    if (r.degenerate)
      ++cell.degenerate;
    else
      cell.rel.push_back(r.rel_to_baseline);
  }
  if (groups.empty()) throw std::invalid_argument("rank_strategies: no rankable records");

  std::vector<RankTable> tables;
  for (const auto& [group_key, cells] : groups) {
    RankTable table;
    table.origin = group_key.first;
    table.key_name = by == GroupBy::K ? "k" : "qubit_bin";
    table.key_value = group_key.second;
    struct Entry {
      std::string strategy;
      double mean_rel;
      double mean_per_qubit;
    };
    std::vector<Entry> entries;
    for (const auto& [strategy, cell] : cells) {
      table.degenerate_rows += cell.degenerate;
      double mean_rel = cell.rel.empty() ? std::numeric_limits<double>::infinity()
                                         : detail::mean_of(cell.rel);
      entries.push_back({strategy, mean_rel, detail::mean_of(cell.per_qubit)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.mean_rel != b.mean_rel) return a.mean_rel < b.mean_rel;
      if (a.mean_per_qubit != b.mean_per_qubit) return a.mean_per_qubit < b.mean_per_qubit;
      return a.strategy < b.strategy;
    });
    for (const Entry& e : entries) {
      table.ranking.push_back(e.strategy);
      table.mean_rel.push_back(e.mean_rel);
      table.mean_per_qubit.push_back(e.mean_per_qubit);
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

struct StrategyDispersion {
  std::string strategy;
  double iqr = 0.0;
  double variance = 0.0;
  std::int64_t count = 0;
};

struct OriginDistortion {
  std::string origin;
  double rho_overall = 0.0;        // Spearman of mean-rank vectors vs reference
  std::map<int, double> rho_per_k;
  double mwu_p = 1.0;              // per-qubit costs, origin sample first
  double rank_biserial = 0.0;
  MwuMethod mwu_method = MwuMethod::NormalApprox;
  double iqr = 0.0;                // pooled rel_to_baseline dispersion
  double variance = 0.0;
  std::int64_t degenerate_rows = 0;
  std::vector<StrategyDispersion> per_strategy;
};

struct DistortionReport {
  std::string reference;
  std::vector<OriginDistortion> origins;
};

namespace detail {

// mean rel_to_baseline per strategy for one (origin, k), strategies fixed.
inline Sample mean_rel_vector(const std::vector<BenchRecord>& records, Origin origin, int k,
                              const std::vector<std::string>& strategies) {
  Sample means;
  for (const std::string& strategy : strategies) {
    Sample values;
    for (const BenchRecord& r : records)
      if (r.ok() && !r.degenerate && r.origin == origin && r.k == k && r.strategy == strategy)
        values.push_back(r.rel_to_baseline);
    means.push_back(values.empty() ? std::numeric_limits<double>::infinity() : mean_of(values));
  }
  return means;
}

}  // namespace detail

// Operationalizes the four distortion axes for every origin against the
// reference: strategy-ranking agreement (Spearman, overall and per k),
// cost-distribution shift (MWU + rank-biserial on per-qubit cut), and
// variability (IQR and variance of rel_to_baseline).
inline DistortionReport distortion_report(const std::vector<BenchRecord>& records, Origin reference) {
  std::set<Origin> origins;
  std::set<std::string> strategy_set;
  std::set<int> k_values;
  for (const BenchRecord& r : records) {
    if (!r.ok()) continue;
    origins.insert(r.origin);
    k_values.insert(r.k);
    if (r.strategy != kBaselineStrategy) strategy_set.insert(r.strategy);
  }
  if (origins.size() < 2) throw std::invalid_argument("distortion_report: need at least 2 origins");
  if (!origins.count(reference))
    throw std::invalid_argument("distortion_report: reference origin has no records");
  const std::vector<std::string> strategies(strategy_set.begin(), strategy_set.end());
  if (strategies.size() < 2)
    throw std::invalid_argument("distortion_report: need at least 2 non-baseline strategies");

  DistortionReport report;
  report.reference = to_string(reference);

  // per-k rank vectors for the reference
  std::map<int, std::vector<double>> reference_ranks;
  for (int k : k_values)
    reference_ranks[k] = detail::midranks(detail::mean_rel_vector(records, reference, k, strategies));

  for (Origin origin : origins) {
    if (origin == reference) continue;
    OriginDistortion od;
    od.origin = to_string(origin);

    Sample mean_rank_origin(strategies.size(), 0.0);
    Sample mean_rank_reference(strategies.size(), 0.0);
    int counted_k = 0;
    for (int k : k_values) {
      Sample origin_means = detail::mean_rel_vector(records, origin, k, strategies);
      bool origin_has_data = false;
      for (double m : origin_means) origin_has_data |= std::isfinite(m);
      if (!origin_has_data) continue;
      std::vector<double> origin_ranks = detail::midranks(origin_means);
      try {
        od.rho_per_k[k] = spearman_rho(origin_ranks, reference_ranks[k]).rho;
      } catch (const std::invalid_argument&) {
        // A fully tied ranking carries no order information; leave this k out.
      }
      for (std::size_t s = 0; s < strategies.size(); ++s) {
        mean_rank_origin[s] += origin_ranks[s];
        mean_rank_reference[s] += reference_ranks[k][s];
      }
      ++counted_k;
    }
    if (counted_k == 0)
      throw std::invalid_argument("distortion_report: origin '" + od.origin + "' has no usable groups");
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      mean_rank_origin[s] /= counted_k;
      mean_rank_reference[s] /= counted_k;
    }
    try {
      od.rho_overall = spearman_rho(mean_rank_origin, mean_rank_reference).rho;
    } catch (const std::invalid_argument&) {
      od.rho_overall = std::numeric_limits<double>::quiet_NaN();
    }

    Sample origin_costs, reference_costs;
    for (const BenchRecord& r : records) {
      if (!r.ok()) continue;
      if (r.origin == origin) origin_costs.push_back(r.per_qubit);
      if (r.origin == reference) reference_costs.push_back(r.per_qubit);
    }
    MwuResult mwu = mann_whitney_u(origin_costs, reference_costs);
    od.mwu_p = mwu.p_value;
    od.rank_biserial = mwu.rank_biserial;
    od.mwu_method = mwu.method;

    Sample pooled_rel;
    for (const std::string& strategy : strategies) {
      Sample rel;
      for (const BenchRecord& r : records) {
        if (!r.ok() || r.origin != origin || r.strategy != strategy) continue;
        if (r.degenerate) {
          ++od.degenerate_rows;
          continue;
        }
        rel.push_back(r.rel_to_baseline);
      }
      od.per_strategy.push_back({strategy, detail::interquartile_range(rel),
                                 detail::sample_variance(rel),
                                 static_cast<std::int64_t>(rel.size())});
      pooled_rel.insert(pooled_rel.end(), rel.begin(), rel.end());
    }
    od.iqr = detail::interquartile_range(pooled_rel);
    od.variance = detail::sample_variance(pooled_rel);
    report.origins.push_back(std::move(od));
  }
  std::sort(report.origins.begin(), report.origins.end(),
            [](const OriginDistortion& a, const OriginDistortion& b) { return a.origin < b.origin; });
  return report;
}

namespace detail {

inline std::string format_stat(double x) {
  if (std::isnan(x)) return "";  // undefined (e.g. rho of a fully tied ranking)
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace detail

// rankings_by_k.csv / rankings_by_bin.csv
inline std::string rankings_csv(const std::vector<RankTable>& tables) {
  std::size_t width = 0;
  for (const RankTable& t : tables) width = std::max(width, t.ranking.size());
  std::ostringstream out;
  out << "origin_group," << (tables.empty() ? "k" : tables.front().key_name);
  for (std::size_t i = 1; i <= width; ++i) out << ",rank_" << i;
  out << '\n';
  for (const RankTable& t : tables) {
    out << t.origin << ',' << t.key_value;
    for (std::size_t i = 0; i < width; ++i) out << ',' << (i < t.ranking.size() ? t.ranking[i] : "");
    out << '\n';
  }
  return out.str();
}

// distortion.csv
inline std::string distortion_csv(const DistortionReport& report) {
  std::ostringstream out;
  out << "origin,vs_reference_rho,mwu_p,rank_biserial,iqr,variance,degenerate_rows\n";
  for (const OriginDistortion& od : report.origins) {
    out << od.origin << ',' << detail::format_stat(od.rho_overall) << ','
        << detail::format_stat(od.mwu_p) << ',' << detail::format_stat(od.rank_biserial) << ','
        << detail::format_stat(od.iqr) << ',' << detail::format_stat(od.variance) << ','
        << od.degenerate_rows << '\n';
  }
  return out.str();
}

}  // namespace qpart
