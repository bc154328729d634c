#include "gsample/generators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsample/rng.hpp"

namespace gsample {

std::string_view to_string(GeneratorModel m) {
  switch (m) {
    case GeneratorModel::forest_fire: return "ff";
    case GeneratorModel::small_world: return "sw";
    case GeneratorModel::mixed: return "mm";
  }
  return "?";
}

GeneratorModel parse_generator_model(std::string_view s) {
  if (s == "ff") return GeneratorModel::forest_fire;
  if (s == "sw") return GeneratorModel::small_world;
  if (s == "mm") return GeneratorModel::mixed;
  throw ConfigError("unknown generator model '" + std::string(s) + "'");
}

void GeneratorConfig::validate() const {
  switch (model) {
    case GeneratorModel::forest_fire:
      if (!(forward_burn > 0.0 && forward_burn < 1.0))
        throw ConfigError("forest fire: burn probability must be in (0, 1)");
      if (nodes < 3) throw ConfigError("forest fire: need at least 3 nodes");
      break;
    case GeneratorModel::small_world:
      if (ring_degree < 2 || ring_degree % 2 != 0)
        throw ConfigError("small world: ring degree must be even and >= 2");
      if (!(rewire >= 0.0 && rewire <= 1.0))
        throw ConfigError("small world: rewire probability must be in [0, 1]");
      if (nodes < std::max<std::size_t>(3, ring_degree + 1))
        throw ConfigError("small world: need at least max(3, k + 1) nodes");
      break;
    case GeneratorModel::mixed:
      if (edges_per_node < 1) throw ConfigError("mixed model: edges per node must be >= 1");
      if (!(preferential >= 0.0 && preferential <= 1.0))
        throw ConfigError("mixed model: preferential fraction must be in [0, 1]");
      if (nodes < std::max<std::size_t>(3, edges_per_node + 1))
        throw ConfigError("mixed model: need at least max(3, k + 1) nodes");
      break;
  }
}

Graph generate(const GeneratorConfig& config) {
  config.validate();
  switch (config.model) {
    case GeneratorModel::forest_fire:
      return forest_fire(config.nodes, config.forward_burn, config.seed);
    case GeneratorModel::small_world:
      return small_world(config.nodes, config.ring_degree, config.rewire, config.seed);
    case GeneratorModel::mixed:
      return mixed_model(config.nodes, config.edges_per_node, config.preferential, config.seed);
  }
  throw ConfigError("unknown generator model");
}

Graph forest_fire(std::size_t n, double forward_burn, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<node_id>> adj(n);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<node_id> queue, links, candidates;
  std::vector<edge> edges;

  for (node_id v = 1; v < n; ++v) {
    const auto ambassador = static_cast<node_id>(rng.uniform_index(v));
    stamp[ambassador] = v;
    queue.assign(1, ambassador);
    links.assign(1, ambassador);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const node_id x = queue[head];
      candidates.clear();
      for (node_id y : adj[x])
        if (stamp[y] != v) candidates.push_back(y);
      const auto burn = std::min<std::size_t>(rng.geometric(forward_burn), candidates.size());
      for (std::size_t i = 0; i < burn; ++i) {
        const auto j = i + rng.uniform_index(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
        const node_id y = candidates[i];
        stamp[y] = v;
        links.push_back(y);
        queue.push_back(y);
      }
    }
    for (node_id y : links) {
      adj[v].push_back(y);
      adj[y].push_back(v);
      edges.emplace_back(y, v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph small_world(std::size_t n, std::size_t k, double rewire, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<node_id>> adj(n);
  auto connected = [&](node_id a, node_id b) {
    return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
  };
  auto unlink = [&](node_id a, node_id b) {
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
  };
  for (node_id u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k / 2; ++j) {
      const auto v = static_cast<node_id>((u + j) % n);
      adj[u].push_back(v);
      adj[v].push_back(u);
    }

  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (node_id u = 0; u < n; ++u) {
      if (!rng.bernoulli(rewire)) continue;
      const auto v = static_cast<node_id>((u + j) % n);
      if (!connected(u, v)) continue;  // already rewired away from the other side
      if (adj[u].size() >= n - 1) continue;
      node_id w;
      do {
        w = static_cast<node_id>(rng.uniform_index(n));
      } while (w == u || connected(u, w));
      unlink(u, v);
      adj[u].push_back(w);
      adj[w].push_back(u);
    }
  }

  std::vector<edge> edges;
  edges.reserve(n * k / 2);
  for (node_id u = 0; u < n; ++u)
    for (node_id v : adj[u])
      if (u < v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

Graph mixed_model(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<edge> edges;
  std::vector<node_id> endpoints;  // every node once per incident edge
  edges.reserve(n * k);
  endpoints.reserve(2 * n * k);
  const auto core = static_cast<node_id>(k + 1);
  for (node_id u = 0; u < core; ++u)
    for (node_id v = u + 1; v < core; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<node_id> targets;
  for (node_id v = core; v < n; ++v) {
    targets.clear();
    while (targets.size() < k) {
      const node_id t = rng.bernoulli(beta)
                            ? endpoints[rng.uniform_index(endpoints.size())]
                            : static_cast<node_id>(rng.uniform_index(v));
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (node_id t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

CalibrationResult calibrate_forest_fire(double target_average_degree, std::size_t n,
                                        std::uint64_t seed) {
  return calibrate([&](double p) { return forest_fire(n, p, seed); }, target_average_degree,
                   0.05, 0.5);
}

}  // namespace gsample
