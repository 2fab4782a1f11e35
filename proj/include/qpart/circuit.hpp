#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpart {

// Provenance class of a workload.
enum class Origin { Real, Random, Generated };

inline std::string to_string(Origin o) {
  switch (o) {
    case Origin::Real: return "real";
    case Origin::Random: return "random";
    case Origin::Generated: return "generated";
  }
  return "unknown";
}

inline Origin origin_from_string(const std::string& s) {
  if (s == "real") return Origin::Real;
  if (s == "random") return Origin::Random;
  if (s == "generated") return Origin::Generated;
  throw std::invalid_argument("unknown circuit origin: '" + s + "'");
}

// One gate application: name, ordered qubit operands, real parameters.
struct Gate {
  std::string name;
  std::vector<int> qubits;
  std::vector<double> params;

  bool operator==(const Gate&) const = default;
};

// Gate-list intermediate representation of a quantum circuit.
struct Circuit {
  std::string id;
  Origin origin = Origin::Real;
  int num_qubits = 0;
  std::vector<Gate> gates;
};

// Throws std::invalid_argument if the circuit violates the IR invariants.
inline void validate(const Circuit& c) {
  if (c.num_qubits < 1) throw std::invalid_argument("circuit must have at least one qubit");
  for (const Gate& g : c.gates) {
    if (g.qubits.empty()) throw std::invalid_argument("gate '" + g.name + "' has no qubit operands");
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (g.qubits[i] < 0 || g.qubits[i] >= c.num_qubits)
        throw std::invalid_argument("gate '" + g.name + "' references qubit out of range");
      for (std::size_t j = i + 1; j < g.qubits.size(); ++j)
        if (g.qubits[i] == g.qubits[j])
          throw std::invalid_argument("gate '" + g.name + "' has duplicate qubit operands");
    }
  }
}

// Gate-composition statistics of one circuit.
struct GateStats {
  std::size_t total_gates = 0;
  std::size_t multiqubit_gates = 0;
  double multiqubit_fraction = 0.0;
  std::size_t max_arity = 0;
};

inline GateStats gate_stats(const Circuit& c) {
  GateStats s;
  s.total_gates = c.gates.size();
  for (const Gate& g : c.gates) {
    if (g.qubits.size() >= 2) ++s.multiqubit_gates;
    s.max_arity = std::max(s.max_arity, g.qubits.size());
  }
  s.multiqubit_fraction =
      s.total_gates > 0 ? static_cast<double>(s.multiqubit_gates) / static_cast<double>(s.total_gates) : 0.0;
  return s;
}

}  // namespace qpart
