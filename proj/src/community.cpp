// Louvain modularity maximization.

#include <algorithm>
#include <numeric>

#include "gsample/properties.hpp"
#include "gsample/rng.hpp"

namespace gsample {

namespace {

// Weighted graph in adjacency-matrix terms: `weight` holds A_ij for j != i,
// `loop` holds A_ii (twice the internal edge weight of an aggregated node).
struct LevelGraph {
  std::size_t n = 0;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weight;
  std::vector<double> loop;

  double strength(std::uint32_t i) const {
    double k = loop[i];
    for (auto e = offsets[i]; e < offsets[i + 1]; ++e) k += weight[e];
    return k;
  }
};

LevelGraph from_graph(const Graph& g) {
  LevelGraph lg;
  lg.n = g.node_count();
  lg.offsets.assign(g.offsets().begin(), g.offsets().end());
  lg.targets.assign(g.adjacency().begin(), g.adjacency().end());
  lg.weight.assign(lg.targets.size(), 1.0);
  lg.loop.assign(lg.n, 0.0);
  return lg;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::size_t count) {
  LevelGraph out;
  out.n = count;
  out.loop.assign(count, 0.0);
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::uint32_t i = 0; i < lg.n; ++i) members[comm[i]].push_back(i);

  std::vector<double> acc(count, 0.0);
  std::vector<std::uint32_t> touched;
  out.offsets.assign(1, 0);
  for (std::uint32_t c = 0; c < count; ++c) {
    touched.clear();
    for (auto i : members[c]) {
      out.loop[c] += lg.loop[i];
      for (auto e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
        const auto d = comm[lg.targets[e]];
        if (d == c) {
          out.loop[c] += lg.weight[e];
          continue;
        }
        if (acc[d] == 0.0) touched.push_back(d);
        acc[d] += lg.weight[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto d : touched) {
      out.targets.push_back(d);
      out.weight.push_back(acc[d]);
      acc[d] = 0.0;
    }
    out.offsets.push_back(out.targets.size());
  }
  return out;
}

// One level of local moving. Returns true if any node changed community;
// `comm` ends up densely relabeled.
bool local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& comm, std::size_t& count,
                 Rng& rng) {
  const auto n = lg.n;
  std::vector<double> k(n), tot(n);
  double two_m = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    k[i] = lg.strength(i);
    two_m += k[i];
  }
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0u);
  tot = k;
  if (two_m == 0) {
    count = n;
    return false;
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order.begin(), order.end());

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> seen;
  bool moved_any = false;
  constexpr double eps = 1e-12;
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (auto i : order) {
      const auto home = comm[i];
      seen.clear();
      for (auto e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
        const auto c = comm[lg.targets[e]];
        if (link[c] == 0.0) seen.push_back(c);
        link[c] += lg.weight[e];
      }
      tot[home] -= k[i];
      const double scale = k[i] / two_m;
      auto best = home;
      double best_gain = link[home] - tot[home] * scale;
      std::sort(seen.begin(), seen.end());
      for (auto c : seen) {
        if (c == home) continue;
        const double gain = link[c] - tot[c] * scale;
        if (gain > best_gain + eps) {
          best_gain = gain;
          best = c;
        }
      }
      for (auto c : seen) link[c] = 0.0;
      tot[best] += k[i];
      if (best != home) {
        comm[i] = best;
        moved = true;
        moved_any = true;
      }
    }
    if (!moved) break;
  }

  std::vector<std::uint32_t> relabel(n, static_cast<std::uint32_t>(-1));
  count = 0;
  for (auto& c : comm) {
    if (relabel[c] == static_cast<std::uint32_t>(-1)) relabel[c] = static_cast<std::uint32_t>(count++);
    c = relabel[c];
  }
  return moved_any;
}

}  // namespace

Partition detect_communities(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> membership(g.node_count());
  std::iota(membership.begin(), membership.end(), 0u);
  LevelGraph level = from_graph(g);
  std::vector<std::uint32_t> comm;
  for (;;) {
    std::size_t count = 0;
    const bool moved = local_moves(level, comm, count, rng);
    if (!moved || count == level.n) break;
    for (auto& m : membership) m = comm[m];
    level = aggregate(level, comm, count);
  }
  return Partition::normalize(membership);
}

}  // namespace gsample
