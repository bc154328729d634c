#include <algorithm>
#include <unordered_set>

#include "gsample/samplers.hpp"

namespace gsample {

namespace {

std::uint64_t key(node_id u, node_id v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

bool within_hops(const Graph& g, node_id from, node_id to, std::size_t hops) {
  std::vector<node_id> frontier{from}, next;
  std::unordered_set<node_id> seen{from};
  for (std::size_t d = 0; d <= hops; ++d) {
    if (std::find(frontier.begin(), frontier.end(), to) != frontier.end()) return true;
    next.clear();
    for (node_id x : frontier)
      for (node_id y : g.neighbors(x))
        if (seen.insert(y).second) next.push_back(y);
    frontier.swap(next);
  }
  return false;
}

std::string at(std::size_t i) { return "step " + std::to_string(i) + ": "; }

}  // namespace

std::optional<std::string> replay_check(const Graph& g, const Sample& s, std::size_t jump_depth) {
  const auto n = g.node_count();
  if (s.nodes.size() != s.budget)
    return "sample has " + std::to_string(s.nodes.size()) + " nodes, budget is " +
           std::to_string(s.budget);
  if (s.budget != sample_budget(s.fraction, n)) return std::string("budget is not ceil(phi * n)");

  std::vector<char> in_sample(n, 0);
  for (node_id v : s.nodes) {
    if (v >= n) return "sample node " + std::to_string(v) + " out of range";
    if (in_sample[v]) return "sample node " + std::to_string(v) + " listed twice";
    in_sample[v] = 1;
  }
  for (auto [u, v] : s.edges) {
    if (u >= v || v >= n) return std::string("malformed sample edge");
    if (!in_sample[u] || !in_sample[v]) return std::string("sample edge leaves the node set");
    if (!g.has_edge(u, v)) return std::string("sample edge not in the graph");
  }
  if (!std::is_sorted(s.edges.begin(), s.edges.end()) ||
      std::adjacent_find(s.edges.begin(), s.edges.end()) != s.edges.end())
    return std::string("sample edges not sorted and unique");

  if (s.mode == FinalizeMode::induced) {
    std::size_t internal = 0;
    for (node_id v : s.nodes)
      for (node_id w : g.neighbors(v))
        if (v < w && in_sample[w]) ++internal;
    if (internal != s.edges.size()) return std::string("induced edge set is incomplete");
  }

  const auto& trace = s.telemetry.trace;
  if (trace.empty()) return std::nullopt;

  std::vector<char> known(n, 0);
  std::unordered_set<std::uint64_t> walked;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Step& st = trace[i];
    if (st.to >= n) return at(i) + "target out of range";
    switch (st.kind) {
      case StepKind::seed:
      case StepKind::restart:
        break;
      case StepKind::traverse:
      case StepKind::reject:
        if (st.from >= n || !known[st.from]) return at(i) + "source was never reached";
        if (!g.has_edge(st.from, st.to)) return at(i) + "edge does not exist";
        if (st.kind == StepKind::traverse) walked.insert(key(st.from, st.to));
        break;
      case StepKind::jump:
        if (st.from >= n || !known[st.from]) return at(i) + "jump origin was never reached";
        if (!within_hops(g, st.from, st.to, jump_depth))
          return at(i) + "jump target outside the jump list";
        break;
    }
    if (st.kind != StepKind::reject) known[st.to] = 1;
  }

  for (node_id v : s.nodes)
    if (!known[v]) return "sample node " + std::to_string(v) + " never visited";
  if (s.mode == FinalizeMode::collected)
    for (auto [u, v] : s.edges)
      if (!walked.count(key(u, v))) return std::string("collected edge was never traversed");
  return std::nullopt;
}

}  // namespace gsample
