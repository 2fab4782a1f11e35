#pragma once

// Umbrella header: circuit IR and OpenQASM subset, hypergraph lowering and
// exchange formats, the partitioner suite, circuit generators, benchmark
// statistics, and the sweep harness.

#include "qpart/bench_record.hpp"
#include "qpart/circuit.hpp"
#include "qpart/config.hpp"
#include "qpart/errors.hpp"
#include "qpart/external_solver.hpp"
#include "qpart/generators.hpp"
#include "qpart/harness.hpp"
#include "qpart/hmetis.hpp"
#include "qpart/hypergraph.hpp"
#include "qpart/partition.hpp"
#include "qpart/qasm.hpp"
#include "qpart/registry.hpp"
#include "qpart/rng.hpp"
#include "qpart/stats.hpp"
