#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "qpart/hmetis.hpp"
#include "qpart/hypergraph.hpp"
#include "qpart/qasm.hpp"
#include "qpart/rng.hpp"
#include "support/instances.hpp"

using namespace qpart;

namespace {

Circuit ghz5() {
  return parse_qasm(
      "OPENQASM 2.0;\nqreg q[5];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[3];\ncx q[3],q[4];\n");
}

// Per-gate cut: one unit per multi-qubit gate instance whose qubit set spans
// blocks. Independent of the merged/weighted representation under test.
Weight per_gate_cut(const Circuit& c, const Assignment& a) {
  Weight cut = 0;
  for (const Gate& g : c.gates) {
    if (g.qubits.size() < 2) continue;
    int first = a[g.qubits[0]];
    for (int q : g.qubits)
      if (a[q] != first) {
        ++cut;
        break;
      }
  }
  return cut;
}

}  // namespace

TEST_CASE("circuit_to_hypergraph lowers GHZ-5 to a path") {
  Hypergraph h = circuit_to_hypergraph(ghz5());
  REQUIRE(h.num_vertices == 5);
  REQUIRE(h.edges.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(h.edges[i].pins == std::vector<int>{i, i + 1});
    CHECK(h.edges[i].weight == 1);
  }
}

TEST_CASE("circuit_to_hypergraph merges repeated gates into weight") {
  Circuit c;
  c.num_qubits = 2;
  for (int i = 0; i < 3; ++i) c.gates.push_back({"cx", {0, 1}, {}});
  Hypergraph h = circuit_to_hypergraph(c);
  REQUIRE(h.edges.size() == 1);
  CHECK(h.edges[0].pins == std::vector<int>{0, 1});
  CHECK(h.edges[0].weight == 3);
}

TEST_CASE("circuit_to_hypergraph ignores single-qubit gates") {
  Circuit c;
  c.num_qubits = 4;
  c.gates.push_back({"h", {0}, {}});
  c.gates.push_back({"x", {3}, {}});
  Hypergraph h = circuit_to_hypergraph(c);
  CHECK(h.num_vertices == 4);
  CHECK(h.edges.empty());
}

TEST_CASE("lowering conserves multi-qubit gate count as total edge weight") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Circuit c;
    c.num_qubits = 3 + static_cast<int>(rng.bounded(8));
    int gates = static_cast<int>(rng.bounded(30));
    for (int g = 0; g < gates; ++g) {
      if (rng.chance(0.3)) {
        c.gates.push_back({"h", {static_cast<int>(rng.bounded(c.num_qubits))}, {}});
      } else {
        int a = static_cast<int>(rng.bounded(c.num_qubits));
        int b = static_cast<int>(rng.bounded(c.num_qubits));
        if (a == b) b = (b + 1) % c.num_qubits;
        c.gates.push_back({"cx", {a, b}, {}});
      }
    }
    Hypergraph h = circuit_to_hypergraph(c);
    CHECK(static_cast<std::size_t>(total_edge_weight(h)) == gate_stats(c).multiqubit_gates);
  }
}

TEST_CASE("weighted cut equals per-gate cut on the unmerged gate list") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Circuit c;
    c.num_qubits = 4 + static_cast<int>(rng.bounded(6));
    int gates = 5 + static_cast<int>(rng.bounded(25));
    for (int g = 0; g < gates; ++g) {
      int a = static_cast<int>(rng.bounded(c.num_qubits));
      int b = static_cast<int>(rng.bounded(c.num_qubits));
      if (a == b) b = (b + 1) % c.num_qubits;
      c.gates.push_back({"cx", {a, b}, {}});
    }
    Hypergraph h = circuit_to_hypergraph(c);
    int k = 2 + static_cast<int>(rng.bounded(3));
    PartitionSpec spec = make_spec(c.num_qubits, k, 1e9);  // huge epsilon: any assignment balanced
    Assignment a(c.num_qubits);
    for (int& b : a) b = static_cast<int>(rng.bounded(k));
    CHECK(cut_report(h, spec, a).cut_cost == per_gate_cut(c, a));
  }
}

TEST_CASE("make_spec evaluates the capacity formula") {
  CHECK(make_spec(10, 2, 0.05).max_block == 6);
  CHECK(make_spec(100, 10, 0.05).max_block == 11);
  CHECK(make_spec(7, 7, 0.0).max_block == 2);
}

TEST_CASE("make_spec rejects invalid arguments") {
  CHECK_THROWS_AS(make_spec(0, 2, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(4, 0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(4, 2, -0.1), std::invalid_argument);
}

TEST_CASE("make_spec always yields a feasible capacity") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(500));
    int k = 1 + static_cast<int>(rng.bounded(16));
    double eps = rng.chance(0.3) ? 0.0 : rng.uniform01() * 0.5;
    PartitionSpec spec = make_spec(n, k, eps);
    CHECK(static_cast<std::int64_t>(spec.k) * spec.max_block >= n);
    CHECK(spec.max_block >= 1);
  }
}

TEST_CASE("cut_report counts spanning edges") {
  Hypergraph h = make_hypergraph(3, {{0, 1}, {1, 2}});
  PartitionSpec spec = make_spec(3, 2, 0.05);
  CutReport r = cut_report(h, spec, {0, 0, 1});
  CHECK(r.cut_cost == 1);
  CHECK(r.block_sizes == std::vector<int>{2, 1});
  CHECK(r.balanced);
}

TEST_CASE("cut_report on the all-zero assignment") {
  Hypergraph h = make_hypergraph(4, {{0, 1}, {1, 2, 3}});
  PartitionSpec spec = make_spec(4, 2, 0.05);
  CutReport r = cut_report(h, spec, {0, 0, 0, 0});
  CHECK(r.cut_cost == 0);
  CHECK_FALSE(r.balanced);  // 4 > max_block = 3
}

TEST_CASE("cut_report uses edge weight") {
  Hypergraph h = make_hypergraph(2, {{0, 1}, {0, 1}, {0, 1}});
  PartitionSpec spec = make_spec(2, 2, 0.0);
  CHECK(cut_report(h, spec, {0, 1}).cut_cost == 3);
}

TEST_CASE("cut_report rejects mismatched assignments") {
  Hypergraph h = make_hypergraph(3, {{0, 1}});
  PartitionSpec spec = make_spec(3, 2, 0.05);
  CHECK_THROWS_AS(cut_report(h, spec, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cut_report(h, spec, {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("write_hmetis emits the documented format") {
  Hypergraph h;
  h.num_vertices = 4;
  h.edges.push_back({{0, 1}, 1});
  h.edges.push_back({{1, 2, 3}, 2});
  CHECK(write_hmetis(h) == "2 4 1\n1 1 2\n2 2 3 4\n");
}

TEST_CASE("write_hmetis of an edgeless hypergraph") {
  Hypergraph h;
  h.num_vertices = 3;
  CHECK(write_hmetis(h) == "0 3 1\n");
}

TEST_CASE("read_hmetis accepts comments and unweighted files") {
  Hypergraph h = read_hmetis("% comment\n2 4 1\n1 1 2\n% another\n2 2 3 4\n");
  REQUIRE(h.edges.size() == 2);
  CHECK(h.edges[1].weight == 2);
  Hypergraph u = read_hmetis("1 3\n1 2 3\n");
  REQUIRE(u.edges.size() == 1);
  CHECK(u.edges[0].weight == 1);
  CHECK(u.edges[0].pins == std::vector<int>{0, 1, 2});
}

TEST_CASE("read_hmetis rejects malformed input") {
  CHECK_THROWS_AS(read_hmetis(""), FormatError);
  CHECK_THROWS_AS(read_hmetis("x 4 1\n"), FormatError);                     // bad header
  CHECK_THROWS_AS(read_hmetis("1 4 11\n1 1 2\n"), FormatError);             // unsupported fmt
  CHECK_THROWS_AS(read_hmetis("1 4 1\n1 1 9\n"), FormatError);              // pin out of range
  CHECK_THROWS_AS(read_hmetis("1 4 1\n0 1 2\n"), FormatError);              // weight < 1
  CHECK_THROWS_AS(read_hmetis("2 4 1\n1 1 2\n"), FormatError);              // short file
  CHECK_THROWS_AS(read_hmetis("1 4 1\n1 1 2\n1 3 4\n"), FormatError);       // trailing edge
  CHECK_THROWS_AS(read_hmetis("1 4 1\n1 2\n"), FormatError);                // single-pin edge
}

TEST_CASE("hmetis round-trip is the identity") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    Hypergraph h = testing::random_hypergraph(rng, 4, 40);
    Hypergraph back = read_hmetis(write_hmetis(h));
    REQUIRE(back == h);
  }
}

TEST_CASE("partition file round-trip and validation") {
  Assignment a = {0, 2, 1, 1};
  CHECK(write_partition_file(a) == "0\n2\n1\n1\n");
  CHECK(read_partition_file("0\n2\n1\n1\n", 4, 3) == a);
  CHECK_THROWS_AS(read_partition_file("0\n1\n", 4, 3), FormatError);        // short
  CHECK_THROWS_AS(read_partition_file("0\n1\n2\n3\n", 4, 3), FormatError);  // out of range
  CHECK_THROWS_AS(read_partition_file("0\nx\n1\n1\n", 4, 3), FormatError);  // junk
}

TEST_CASE("brute_force_optimal solves a separable instance") {
  Hypergraph h = make_hypergraph(4, {{0, 1}, {2, 3}});
  BruteForceResult r = brute_force_optimal(h, make_spec(4, 2, 0.05));
  CHECK(r.cut_cost == 0);
  CHECK(r.assignment == Assignment{0, 0, 1, 1});  // lexicographically smallest optimum
}

TEST_CASE("brute_force_optimal on the pairwise triangle") {
  // Three vertices, all pairs connected, k=2, max_block=2: every balanced
  // bipartition isolates one vertex and cuts exactly its two incident pairs.
  Hypergraph h = make_hypergraph(3, {{0, 1}, {1, 2}, {0, 2}});
  PartitionSpec spec = make_spec(3, 2, 0.0);
  REQUIRE(spec.max_block == 2);
  BruteForceResult r = brute_force_optimal(h, spec);
  CHECK(r.cut_cost == 2);

  // Cross-check with an independent enumeration that walks assignments in
  // the reverse order and from the highest block down.
  Weight best = -1;
  Assignment a(3, 0);
  for (int b2 = spec.k - 1; b2 >= 0; --b2)
    for (int b1 = spec.k - 1; b1 >= 0; --b1)
      for (int b0 = spec.k - 1; b0 >= 0; --b0) {
        a = {b0, b1, b2};
        CutReport rep = cut_report(h, spec, a);
        if (!rep.balanced) continue;
        if (best < 0 || rep.cut_cost < best) best = rep.cut_cost;
      }
  CHECK(best == r.cut_cost);
}

TEST_CASE("brute_force_optimal when the edge must span") {
  Hypergraph h = make_hypergraph(3, {{0, 1, 2}});
  PartitionSpec spec = make_spec(3, 3, 0.0);
  REQUIRE(spec.max_block == 2);
  BruteForceResult r = brute_force_optimal(h, spec);
  CHECK(r.cut_cost == 1);
  CHECK(r.assignment == Assignment{0, 0, 1});
}

TEST_CASE("brute_force_optimal enforces the size guard") {
  Hypergraph h = make_hypergraph(40, {{0, 1}});
  CHECK_THROWS_AS(brute_force_optimal(h, make_spec(40, 4, 0.05)), std::invalid_argument);
}

TEST_CASE("hypergraph validation catches invariant violations") {
  Hypergraph h;
  h.num_vertices = 3;
  h.edges.push_back({{0, 1}, 1});
  h.edges.push_back({{0, 1}, 2});  // duplicate pin set
  CHECK_THROWS_AS(validate(h), std::invalid_argument);
  h.edges.pop_back();
  h.edges.push_back({{1, 0}, 1});  // unsorted pins
  CHECK_THROWS_AS(validate(h), std::invalid_argument);
  h.edges.pop_back();
  h.edges.push_back({{1}, 1});  // single pin
  CHECK_THROWS_AS(validate(h), std::invalid_argument);
  h.edges.pop_back();
  h.edges.push_back({{1, 5}, 1});  // out of range
  CHECK_THROWS_AS(validate(h), std::invalid_argument);
}
