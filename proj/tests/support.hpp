#pragma once

#include <vector>

#include "gsample/graph.hpp"
#include "oracles.hpp"

namespace fixtures {

using gsample::edge;
using gsample::Graph;
using gsample::node_id;

inline Graph from(std::size_t n, const std::vector<oracle::Edge>& e) {
  std::vector<edge> edges(e.begin(), e.end());
  return Graph::from_edges(n, edges);
}

inline std::vector<oracle::Edge> complete(std::size_t n, node_id offset = 0) {
  std::vector<oracle::Edge> e;
  for (node_id i = 0; i < n; ++i)
    for (node_id j = i + 1; j < n; ++j) e.emplace_back(offset + i, offset + j);
  return e;
}

/// Hub 0 joined to leaves 1..n-1.
inline std::vector<oracle::Edge> star(std::size_t n) {
  std::vector<oracle::Edge> e;
  for (node_id i = 1; i < n; ++i) e.emplace_back(0, i);
  return e;
}

inline std::vector<oracle::Edge> path(std::size_t n) {
  std::vector<oracle::Edge> e;
  for (node_id i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline std::vector<oracle::Edge> cycle(std::size_t n) {
  auto e = path(n);
  e.emplace_back(0, static_cast<node_id>(n - 1));
  return e;
}

/// K5 on 0..4 and K5 on 5..9 joined by the bridge (4, 5).
inline std::vector<oracle::Edge> barbell() {
  auto e = complete(5);
  for (auto x : complete(5, 5)) e.push_back(x);
  e.emplace_back(4, 5);
  return e;
}

/// Three K10 blocks (0..9, 10..19, 20..29) chained by single bridges.
inline std::vector<oracle::Edge> three_communities() {
  std::vector<oracle::Edge> e;
  for (node_id b = 0; b < 3; ++b)
    for (auto x : complete(10, 10 * b)) e.push_back(x);
  e.emplace_back(9, 10);
  e.emplace_back(19, 20);
  return e;
}

}  // namespace fixtures
