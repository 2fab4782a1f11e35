#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "qpart/errors.hpp"
#include "qpart/hypergraph.hpp"

namespace qpart {

// hMETIS-style exchange format. Line 1: "<num_edges> <num_vertices> 1"
// (trailing 1 = edge weights present). One line per edge: weight followed
// by 1-indexed pins in ascending order. '%' starts a comment line.
inline std::string write_hmetis(const Hypergraph& h) {
  validate(h);
  std::ostringstream out;
  out << h.edges.size() << ' ' << h.num_vertices << " 1\n";
  for (const Hyperedge& e : h.edges) {
    out << e.weight;
    for (int pin : e.pins) out << ' ' << pin + 1;
    out << '\n';
  }
  return out.str();
}

inline Hypergraph read_hmetis(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_content_line = [&](std::string& dst) -> bool {
    while (std::getline(in, line)) {
      std::size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '%') continue;
      dst = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(header)) throw FormatError("hmetis: empty file");
  std::istringstream hs(header);
  long long num_edges = -1, num_vertices = -1;
  int fmt = 0;
  if (!(hs >> num_edges >> num_vertices)) throw FormatError("hmetis: malformed header");
  bool weighted = false;
  if (hs >> fmt) {
    if (fmt == 1)
      weighted = true;
    else
      throw FormatError("hmetis: unsupported fmt flag " + std::to_string(fmt));
  }
  std::string trailing;
  if (hs >> trailing) throw FormatError("hmetis: malformed header");
  if (num_edges < 0 || num_vertices < 1) throw FormatError("hmetis: malformed header");

  std::vector<std::vector<int>> pin_sets;
  std::vector<Weight> weights;
  for (long long i = 0; i < num_edges; ++i) {
    std::string edge_line;
    if (!next_content_line(edge_line))
      throw FormatError("hmetis: expected " + std::to_string(num_edges) + " edge lines, got " + std::to_string(i));
    std::istringstream es(edge_line);
    Weight w = 1;
    if (weighted && !(es >> w)) throw FormatError("hmetis: malformed edge line");
    if (w < 1) throw FormatError("hmetis: edge weight must be >= 1");
    std::vector<int> pins;
    long long pin;
    while (es >> pin) {
      if (pin < 1 || pin > num_vertices)
        throw FormatError("hmetis: pin index " + std::to_string(pin) + " out of range");
      pins.push_back(static_cast<int>(pin - 1));
    }
    if (!es.eof()) throw FormatError("hmetis: malformed edge line");
    if (pins.size() < 2) throw FormatError("hmetis: edge with fewer than 2 pins");
    std::sort(pins.begin(), pins.end());
    for (std::size_t p = 1; p < pins.size(); ++p)
      if (pins[p] == pins[p - 1]) throw FormatError("hmetis: duplicate pin within edge");
    pin_sets.push_back(std::move(pins));
    weights.push_back(w);
  }
  std::string extra;
  if (next_content_line(extra)) throw FormatError("hmetis: trailing content after last edge");

  // Merge identical pin sets, first occurrence keeps its position.
  Hypergraph h;
  h.num_vertices = static_cast<int>(num_vertices);
  std::map<std::vector<int>, std::size_t> index_of;
  for (std::size_t i = 0; i < pin_sets.size(); ++i) {
    auto [it, inserted] = index_of.emplace(std::move(pin_sets[i]), h.edges.size());
    if (inserted)
      h.edges.push_back({it->first, weights[i]});
    else
      h.edges[it->second].weight += weights[i];
  }
  validate(h);
  return h;
}

// Companion partition file: exactly num_vertices lines, each a block id in [0, k).
inline std::string write_partition_file(const Assignment& a) {
  std::ostringstream out;
  for (int b : a) out << b << '\n';
  return out.str();
}

inline Assignment read_partition_file(const std::string& text, int num_vertices, int k) {
  std::istringstream in(text);
  Assignment a;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    std::istringstream ls(line);
    long long b;
    if (!(ls >> b)) throw FormatError("partition file: malformed line '" + line + "'");
    std::string extra;
    if (ls >> extra) throw FormatError("partition file: malformed line '" + line + "'");
    if (b < 0 || b >= k) throw FormatError("partition file: block id " + std::to_string(b) + " out of range");
    a.push_back(static_cast<int>(b));
  }
  if (static_cast<int>(a.size()) != num_vertices)
    throw FormatError("partition file: expected " + std::to_string(num_vertices) + " entries, got " +
                      std::to_string(a.size()));
  return a;
}

}  // namespace qpart
