#pragma once

#include <string>
#include <vector>

#include "qpart/external_solver.hpp"
#include "qpart/partition.hpp"

namespace qpart {

struct StrategyInfo {
  std::string name;
  bool external = false;
};

// The five built-in strategies plus any configured external solvers, in a
// stable order: built-ins first, then externals by registration order.
class StrategyRegistry {
 public:
  static const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"random", "greedy", "stochg", "fm", "ea"};
    return names;
  }

  void register_external(ExternalSolverConfig solver) {
    if (solver.name.empty()) throw std::invalid_argument("external solver needs a name");
    for (const std::string& b : builtin_names())
      if (b == solver.name)
        throw std::invalid_argument("external solver name '" + solver.name + "' collides with a built-in");
    for (const ExternalSolverConfig& existing : externals_)
      if (existing.name == solver.name)
        throw std::invalid_argument("duplicate external solver name '" + solver.name + "'");
    externals_.push_back(std::move(solver));
  }

  std::vector<StrategyInfo> list_strategies() const {
    std::vector<StrategyInfo> out;
    for (const std::string& name : builtin_names()) out.push_back({name, false});
    for (const ExternalSolverConfig& solver : externals_) out.push_back({solver.name, true});
    return out;
  }

  bool has(const std::string& name) const {
    for (const StrategyInfo& s : list_strategies())
      if (s.name == name) return true;
    return false;
  }

  PartitionOutcome run(const std::string& name, const PartitionRequest& req) const {
    if (name == "random") return partition_random(req);
    if (name == "greedy") return partition_greedy(req);
    if (name == "stochg") return partition_stoch_greedy(req, stochg);
    if (name == "fm") return partition_fm(req);
    if (name == "ea") return partition_ea(req, ea);
    for (const ExternalSolverConfig& solver : externals_)
      if (solver.name == name) return partition_external(req, solver);
    throw std::invalid_argument("unknown strategy '" + name + "'");
  }

  StochgConfig stochg;
  EaConfig ea;

 private:
  std::vector<ExternalSolverConfig> externals_;
};

}  // namespace qpart
