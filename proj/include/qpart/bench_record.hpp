#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/circuit.hpp"
#include "qpart/errors.hpp"
#include "qpart/hypergraph.hpp"

namespace qpart {

// One (circuit, k, strategy) evaluation row.
struct BenchRecord {
  std::string circuit_id;
  Origin origin = Origin::Real;
  int n_qubits = 0;
  int n_edges = 0;
  std::int64_t n_multiqubit_gates = 0;
  int k = 0;
  std::string strategy;
  Weight cut_cost = 0;
  double per_qubit = std::numeric_limits<double>::quiet_NaN();
  double rel_to_baseline = std::numeric_limits<double>::quiet_NaN();
  bool balanced = false;
  std::string status = "ok";
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;

  // Derived, not serialized: the (circuit, k) group has a zero-cut random
  // baseline, so rel_to_baseline is a sentinel excluded from means.
  bool degenerate = false;

  bool ok() const { return status == "ok"; }
};

inline const char* bench_csv_header() {
  return "circuit_id,origin,n_qubits,n_edges,n_multiqubit_gates,k,strategy,cut_cost,per_qubit,"
         "rel_to_baseline,balanced,status,seed,elapsed_ms";
}

namespace detail {

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline double parse_double_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::strtod(s.c_str(), nullptr);
}

}  // namespace detail

inline std::string to_csv_row(const BenchRecord& r) {
  std::ostringstream out;
  out << r.circuit_id << ',' << to_string(r.origin) << ',' << r.n_qubits << ',' << r.n_edges << ','
      << r.n_multiqubit_gates << ',' << r.k << ',' << r.strategy << ',';
  if (r.ok()) {
    char elapsed[40];
    std::snprintf(elapsed, sizeof(elapsed), "%.3f", r.elapsed_ms);
    out << r.cut_cost << ',' << detail::format_double(r.per_qubit) << ','
        << detail::format_double(r.rel_to_baseline) << ',' << (r.balanced ? "true" : "false") << ",ok,"
        << r.seed << ',' << elapsed;
  } else {
    out << ",,,," << r.status << ',' << r.seed << ',';
  }
  return out.str();
}

inline BenchRecord bench_record_from_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  if (fields.size() != 14) throw FormatError("results csv: expected 14 fields, got row '" + line + "'");

  BenchRecord r;
  r.circuit_id = fields[0];
  r.origin = origin_from_string(fields[1]);
  r.n_qubits = std::stoi(fields[2]);
  r.n_edges = std::stoi(fields[3]);
  r.n_multiqubit_gates = std::stoll(fields[4]);
  r.k = std::stoi(fields[5]);
  r.strategy = fields[6];
  r.status = fields[11];
  if (r.ok()) {
    r.cut_cost = std::stoll(fields[7]);
    r.per_qubit = detail::parse_double_field(fields[8]);
    r.rel_to_baseline = detail::parse_double_field(fields[9]);
    r.balanced = fields[10] == "true";
    r.elapsed_ms = detail::parse_double_field(fields[13]);
  }
  r.seed = std::stoull(fields[12]);
  return r;
}

}  // namespace qpart
