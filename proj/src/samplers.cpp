#include "gsample/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

#include "gsample/rng.hpp"

namespace gsample {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::frontier: return "fs";
    case Method::expansion: return "xs";
    case Method::rank_degree: return "rd";
    case Method::list: return "ls";
    case Method::hybrid_jump: return "hj";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (auto m : all_methods)
    if (to_string(m) == s) return m;
  throw ConfigError("unknown sampling method '" + std::string(s) + "'");
}

std::string_view to_string(FinalizeMode m) {
  return m == FinalizeMode::induced ? "induced" : "collected";
}

FinalizeMode parse_finalize_mode(std::string_view s) {
  if (s == "induced") return FinalizeMode::induced;
  if (s == "collected") return FinalizeMode::collected;
  throw ConfigError("unknown finalize mode '" + std::string(s) + "'");
}

FinalizeMode native_mode(Method m) {
  return m == Method::list ? FinalizeMode::induced : FinalizeMode::collected;
}

std::size_t sample_budget(double fraction, std::size_t node_count) {
  return static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(node_count) - 1e-9));
}

void SamplerConfig::validate(std::size_t node_count) const {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("sampling fraction must be in (0, 1]");
  if (fraction * static_cast<double>(node_count) < 1.0 - 1e-9)
    throw ConfigError("sampling fraction selects fewer than one node");
  if (walkers < 1) throw ConfigError("frontier sampling needs at least one walker");
  if (rd_seeds < 1) throw ConfigError("rank degree needs at least one seed");
  if (!(rd_top > 0.0 && rd_top <= 1.0)) throw ConfigError("rank degree top fraction must be in (0, 1]");
  if (jump_probability && !(*jump_probability >= 0.0 && *jump_probability <= 1.0))
    throw ConfigError("jump probability must be in [0, 1]");
  if (degree_probes < 1) throw ConfigError("hybrid jump needs at least one degree probe");
  for (node_id v : start_nodes)
    if (v >= node_count) throw ConfigError("start node out of range");
}

namespace {

// Nodes not yet in the sample, with O(1) uniform draws and removal.
class UnsampledPool {
 public:
  explicit UnsampledPool(std::size_t n) : pool_(n), pos_(n) {
    for (node_id v = 0; v < n; ++v) pool_[v] = pos_[v] = v;
  }
  bool empty() const { return pool_.empty(); }
  node_id draw(Rng& rng) const { return pool_[rng.uniform_index(pool_.size())]; }

  /// k distinct uniform members (k <= size), without removing them.
  std::vector<node_id> draw_distinct(std::size_t k, Rng& rng) {
    std::vector<node_id> out;
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + rng.uniform_index(pool_.size() - i);
      swap_slots(i, j);
      out.push_back(pool_[i]);
    }
    return out;
  }

  void remove(node_id v) {
    const auto i = pos_[v];
    swap_slots(i, pool_.size() - 1);
    pool_.pop_back();
    pos_[v] = invalid_node;
  }

 private:
  void swap_slots(std::size_t i, std::size_t j) {
    std::swap(pool_[i], pool_[j]);
    pos_[pool_[i]] = static_cast<node_id>(i);
    pos_[pool_[j]] = static_cast<node_id>(j);
  }
  std::vector<node_id> pool_;
  std::vector<node_id> pos_;
};

// Accumulates V_s / E_s and the trace while a sampler runs.
class Collector {
 public:
  Collector(const Graph& g, const SamplerConfig& cfg)
      : g_(g),
        cfg_(cfg),
        rng_(cfg.seed),
        pool_(g.node_count()),
        in_sample_(g.node_count(), 0),
        budget_(sample_budget(cfg.fraction, g.node_count())) {
    cfg.validate(g.node_count());
    sample_.method = cfg.method;
    sample_.fraction = cfg.fraction;
    sample_.seed = cfg.seed;
    sample_.mode = cfg.mode;
    sample_.budget = budget_;
  }

  Rng& rng() { return rng_; }
  UnsampledPool& pool() { return pool_; }
  std::size_t budget() const { return budget_; }
  bool full() const { return sample_.nodes.size() >= budget_; }
  bool sampled(node_id v) const { return in_sample_[v] != 0; }
  Telemetry& telemetry() { return sample_.telemetry; }

  bool add_node(node_id v) {
    if (in_sample_[v]) return false;
    in_sample_[v] = 1;
    pool_.remove(v);
    sample_.nodes.push_back(v);
    if (on_add_) on_add_(v);
    return true;
  }

  void add_edge(node_id u, node_id v) {
    sample_.edges.emplace_back(std::min(u, v), std::max(u, v));
  }

  void log(StepKind kind, node_id from, node_id to) {
    ++sample_.telemetry.steps;
    if (kind == StepKind::restart) ++sample_.telemetry.restarts;
    if (cfg_.record_trace) sample_.telemetry.trace.push_back({kind, from, to});
  }

  /// Start node for the i-th seed: the configured override, else a uniform
  /// unsampled node.
  node_id seed_node(std::size_t i) {
    if (i < cfg_.start_nodes.size() && !sampled(cfg_.start_nodes[i])) return cfg_.start_nodes[i];
    return pool_.draw(rng_);
  }

  void on_add(std::function<void(node_id)> f) { on_add_ = std::move(f); }

  Sample finish() { return finalize(g_, std::move(sample_), cfg_.mode); }

 private:
  const Graph& g_;
  const SamplerConfig& cfg_;
  Rng rng_;
  UnsampledPool pool_;
  std::vector<char> in_sample_;
  std::size_t budget_;
  Sample sample_;
  std::function<void(node_id)> on_add_;
};

// Tracks how many nodes of each connected component are sampled, so walkers
// stuck in an exhausted component can be restarted.
class ComponentTracker {
 public:
  explicit ComponentTracker(const Graph& g) : label_(component_labels(g, &count_)) {
    size_.assign(count_, 0);
    for (auto l : label_) ++size_[l];
    taken_.assign(count_, 0);
  }
  void sampled(node_id v) { ++taken_[label_[v]]; }
  bool exhausted(node_id v) const { return taken_[label_[v]] == size_[label_[v]]; }

 private:
  std::size_t count_ = 0;
  std::vector<std::uint32_t> label_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> taken_;
};

// Max-heap order: larger key first, then smaller id.
struct KeyedNode {
  std::uint64_t key;
  node_id id;
  bool operator<(const KeyedNode& o) const {
    return key != o.key ? key < o.key : id > o.id;
  }
};

}  // namespace

Sample frontier_sample(const Graph& g, const SamplerConfig& cfg) {
  Collector c(g, cfg);
  ComponentTracker comps(g);
  c.on_add([&](node_id v) { comps.sampled(v); });
  auto& rng = c.rng();
  auto& tel = c.telemetry();

  const std::size_t m = std::min(cfg.walkers, g.node_count());
  tel.walkers = m;
  std::vector<node_id> walkers;
  const std::size_t fixed = std::min(m, cfg.start_nodes.size());
  walkers.assign(cfg.start_nodes.begin(), cfg.start_nodes.begin() + fixed);
  for (node_id v : c.pool().draw_distinct(m - fixed, rng)) walkers.push_back(v);
  for (node_id v : walkers) c.log(StepKind::seed, invalid_node, v);

  std::vector<std::uint32_t> degrees(m);
  while (!c.full()) {
    // A walker on an isolated node or in a fully sampled component can make
    // no progress: move it to a fresh unsampled node.
    for (auto& w : walkers) {
      while (!c.full() && (g.degree(w) == 0 || comps.exhausted(w))) {
        w = c.pool().draw(rng);
        c.log(StepKind::restart, invalid_node, w);
        if (g.degree(w) == 0) c.add_node(w);
      }
    }
    if (c.full()) break;

    std::uint64_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      degrees[i] = static_cast<std::uint32_t>(g.degree(walkers[i]));
      total += degrees[i];
    }
    auto r = rng.uniform_index(total);
    std::size_t pick = 0;
    while (r >= degrees[pick]) r -= degrees[pick++];
    if (cfg.record_walker_choices)
      tel.walker_choices.push_back({degrees, static_cast<std::uint32_t>(pick)});

    const node_id v = walkers[pick];
    const auto nb = g.neighbors(v);
    const node_id w = nb[rng.uniform_index(nb.size())];
    c.log(StepKind::traverse, v, w);
    c.add_node(v);
    c.add_node(w);
    c.add_edge(v, w);
    walkers[pick] = w;
  }
  return c.finish();
}

Sample expansion_sample(const Graph& g, const SamplerConfig& cfg) {
  Collector c(g, cfg);
  const auto n = g.node_count();
  enum : std::uint8_t { unexplored = 0, frontier = 1, member = 2 };
  std::vector<std::uint8_t> state(n, unexplored);
  std::vector<std::uint32_t> score(n, 0);
  std::vector<node_id> parent(n, invalid_node);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  std::priority_queue<KeyedNode> heap;
  std::vector<node_id> fresh;

  // Moves v into S; its unexplored neighbors join N(S), which lowers the
  // score of every older frontier node adjacent to them.
  auto absorb = [&](node_id v) {
    state[v] = member;
    c.add_node(v);
    fresh.clear();
    ++round;
    for (node_id u : g.neighbors(v))
      if (state[u] == unexplored) {
        state[u] = frontier;
        parent[u] = v;
        stamp[u] = round;
        fresh.push_back(u);
      }
    for (node_id u : fresh) {
      std::uint32_t s = 0;
      for (node_id x : g.neighbors(u)) {
        if (state[x] == unexplored) {
          ++s;
        } else if (state[x] == frontier && stamp[x] != round) {
          heap.push({--score[x], x});
        }
      }
      score[u] = s;
      heap.push({s, u});
    }
  };

  std::size_t seeds = 0;
  while (!c.full()) {
    node_id next = invalid_node;
    while (!heap.empty()) {
      auto top = heap.top();
      heap.pop();
      if (state[top.id] == frontier && score[top.id] == top.key) {
        next = top.id;
        break;
      }
    }
    if (next == invalid_node) {
      next = c.seed_node(seeds);
      c.log(seeds++ == 0 ? StepKind::seed : StepKind::restart, invalid_node, next);
    } else {
      c.log(StepKind::traverse, parent[next], next);
      c.add_edge(parent[next], next);
    }
    absorb(next);
  }
  return c.finish();
}

Sample rank_degree_sample(const Graph& g, const SamplerConfig& cfg) {
  Collector c(g, cfg);
  auto& rng = c.rng();

  const std::size_t s = std::min(cfg.rd_seeds, g.node_count());
  std::vector<node_id> seeds;
  const std::size_t fixed = std::min(s, cfg.start_nodes.size());
  seeds.assign(cfg.start_nodes.begin(), cfg.start_nodes.begin() + fixed);
  for (node_id v : c.pool().draw_distinct(s - fixed, rng)) seeds.push_back(v);
  for (node_id v : seeds) {
    c.log(StepKind::seed, invalid_node, v);
    c.add_node(v);
  }

  auto ranks_before = [&](node_id a, node_id b) {
    const auto da = g.degree(a), db = g.degree(b);
    return da != db ? da > db : a < b;
  };

  std::vector<node_id> ranked;
  while (!c.full()) {
    if (seeds.empty()) {
      const node_id r = c.pool().draw(rng);
      c.log(StepKind::restart, invalid_node, r);
      c.add_node(r);
      seeds.assign(1, r);
      continue;
    }
    const auto idx = rng.uniform_index(seeds.size());
    const node_id x = seeds[idx];
    ranked.clear();
    for (node_id w : g.neighbors(x))
      if (!c.sampled(w)) ranked.push_back(w);
    if (ranked.empty()) {
      seeds[idx] = seeds.back();
      seeds.pop_back();
      continue;
    }
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg.rd_top * static_cast<double>(ranked.size()) - 1e-9)));
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                      ranked.end(), ranks_before);
    ranked.resize(k);
    for (node_id t : ranked) {
      c.log(StepKind::traverse, x, t);
      c.add_node(t);
      c.add_edge(x, t);
    }
    seeds = ranked;
  }
  return c.finish();
}

Sample list_sample(const Graph& g, const SamplerConfig& cfg) {
  Collector c(g, cfg);
  std::vector<char> listed(g.node_count(), 0);
  std::vector<node_id> parent(g.node_count(), invalid_node);
  std::priority_queue<KeyedNode> candidates;

  auto take = [&](node_id v) {
    c.add_node(v);
    for (node_id w : g.neighbors(v))
      if (!listed[w] && !c.sampled(w)) {
        listed[w] = 1;
        parent[w] = v;
        candidates.push({g.degree(w), w});
      }
  };

  std::size_t seeds = 0;
  while (!c.full()) {
    if (candidates.empty()) {
      const node_id s = c.seed_node(seeds);
      c.log(seeds++ == 0 ? StepKind::seed : StepKind::restart, invalid_node, s);
      listed[s] = 1;
      take(s);
      continue;
    }
    const node_id v = candidates.top().id;
    candidates.pop();
    c.log(StepKind::traverse, parent[v], v);
    c.add_edge(parent[v], v);
    take(v);
  }
  return c.finish();
}

Sample hybrid_jump_sample(const Graph& g, const SamplerConfig& cfg) {
  Collector c(g, cfg);
  ComponentTracker comps(g);
  c.on_add([&](node_id v) { comps.sampled(v); });
  auto& rng = c.rng();
  auto& tel = c.telemetry();
  const auto n = g.node_count();

  double degree_sum = 0;
  for (std::size_t i = 0; i < cfg.degree_probes; ++i)
    degree_sum += static_cast<double>(g.degree(static_cast<node_id>(rng.uniform_index(n))));
  tel.estimated_degree = degree_sum / static_cast<double>(cfg.degree_probes);
  const double alpha = cfg.jump_probability.value_or(
      tel.estimated_degree > 0 ? std::min(1.0, 1.0 / tel.estimated_degree) : 1.0);
  tel.jump_probability = alpha;

  std::vector<std::uint32_t> stamp(n, 0), depth(n, 0);
  std::uint32_t round = 0;
  std::vector<node_id> jump_list;
  node_id jump_origin = invalid_node;
  auto refresh_jump_list = [&](node_id origin) {
    jump_origin = origin;
    jump_list.assign(1, origin);
    stamp[origin] = ++round;
    depth[origin] = 0;
    for (std::size_t head = 0; head < jump_list.size(); ++head) {
      const node_id x = jump_list[head];
      if (depth[x] == cfg.jump_depth) continue;
      for (node_id y : g.neighbors(x))
        if (stamp[y] != round) {
          stamp[y] = round;
          depth[y] = depth[x] + 1;
          jump_list.push_back(y);
        }
    }
    jump_list.erase(jump_list.begin());
  };

  node_id current = c.seed_node(0);
  c.log(StepKind::seed, invalid_node, current);
  c.add_node(current);
  refresh_jump_list(current);

  while (!c.full()) {
    if (g.degree(current) == 0 || comps.exhausted(current)) {
      current = c.pool().draw(rng);
      c.log(StepKind::restart, invalid_node, current);
      c.add_node(current);
      refresh_jump_list(current);
      continue;
    }

    const auto nb = g.neighbors(current);
    const node_id w = nb[rng.uniform_index(nb.size())];
    const auto dv = static_cast<double>(nb.size());
    const auto dw = static_cast<double>(g.degree(w));
    ++tel.proposals;
    if (dw <= dv || rng.uniform01() * dw < dv) {
      ++tel.acceptances;
      c.log(StepKind::traverse, current, w);
      c.add_node(w);
      c.add_edge(current, w);
      current = w;
    } else {
      c.log(StepKind::reject, current, w);
    }
    if (c.full()) break;

    if (alpha > 0 && rng.bernoulli(alpha) && !jump_list.empty()) {
      const node_id target = jump_list[rng.uniform_index(jump_list.size())];
      ++tel.jumps;
      c.log(StepKind::jump, jump_origin, target);
      c.add_node(target);
      current = target;
      refresh_jump_list(target);
    }
  }
  return c.finish();
}

Sample sample_graph(const Graph& g, const SamplerConfig& cfg) {
  switch (cfg.method) {
    case Method::frontier: return frontier_sample(g, cfg);
    case Method::expansion: return expansion_sample(g, cfg);
    case Method::rank_degree: return rank_degree_sample(g, cfg);
    case Method::list: return list_sample(g, cfg);
    case Method::hybrid_jump: return hybrid_jump_sample(g, cfg);
  }
  throw ConfigError("unknown sampling method");
}

Sample finalize(const Graph& g, Sample raw, FinalizeMode mode) {
  if (raw.nodes.empty()) throw std::invalid_argument("cannot finalize an empty sample");
  Sample s = std::move(raw);
  s.mode = mode;

  std::vector<char> keep(g.node_count(), 0);
  if (s.nodes.size() > s.budget) {
    s.telemetry.trimmed += s.nodes.size() - s.budget;
    s.nodes.resize(s.budget);
  }
  for (node_id v : s.nodes) keep[v] = 1;

  if (mode == FinalizeMode::induced) {
    s.edges.clear();
    for (node_id v : s.nodes)
      for (node_id w : g.neighbors(v))
        if (v < w && keep[w]) s.edges.emplace_back(v, w);
  } else {
    std::erase_if(s.edges, [&](const edge& e) { return !keep[e.first] || !keep[e.second]; });
  }
  std::sort(s.edges.begin(), s.edges.end());
  s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
  return s;
}

Graph sample_to_graph(const Graph& g, const Sample& s) {
  const NodeSet nodes = s.node_set(g.node_count());
  if (s.mode == FinalizeMode::induced) return induced_subgraph(g, nodes);
  std::vector<node_id> local(g.node_count(), invalid_node);
  node_id next = 0;
  std::vector<std::int64_t> ids;
  for (node_id v : nodes) {
    local[v] = next++;
    ids.push_back(g.original_id(v));
  }
  std::vector<edge> edges;
  edges.reserve(s.edges.size());
  for (auto [u, v] : s.edges) edges.emplace_back(local[u], local[v]);
  Graph out = Graph::from_edges(nodes.size(), edges);
  out.set_original_ids(std::move(ids));
  return out;
}

}  // namespace gsample
