#include "gsample/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "gsample/rng.hpp"

namespace gsample {

double average_degree(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("average degree of an empty graph");
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

Distribution degree_distribution(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("degree distribution of an empty graph");
  std::size_t max_degree = 0;
  for (node_id v = 0; v < g.node_count(); ++v) max_degree = std::max(max_degree, g.degree(v));
  std::vector<std::uint64_t> hist(max_degree + 1, 0);
  for (node_id v = 0; v < g.node_count(); ++v) ++hist[g.degree(v)];
  std::vector<double> support;
  std::vector<std::uint64_t> counts;
  for (std::size_t d = 0; d < hist.size(); ++d)
    if (hist[d]) {
      support.push_back(static_cast<double>(d));
      counts.push_back(hist[d]);
    }
  return Distribution::from_counts(std::move(support), counts);
}

std::vector<std::uint64_t> triangles_per_node(const Graph& g) {
  const auto n = g.node_count();
  // Orient every edge towards the endpoint of higher (degree, id) rank; each
  // triangle is then found exactly once from its lowest-ranked corner.
  auto higher = [&](node_id a, node_id b) {
    const auto da = g.degree(a), db = g.degree(b);
    return da != db ? db > da : b > a;
  };
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (node_id u = 0; u < n; ++u)
    for (node_id v : g.neighbors(u))
      if (higher(u, v)) ++offsets[u + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<node_id> out(offsets[n]);
  for (node_id u = 0; u < n; ++u) {
    auto pos = offsets[u];
    for (node_id v : g.neighbors(u))
      if (higher(u, v)) out[pos++] = v;
  }

  std::vector<std::uint64_t> tri(n, 0);
  std::vector<node_id> mark(n, invalid_node);
  for (node_id u = 0; u < n; ++u) {
    for (auto i = offsets[u]; i < offsets[u + 1]; ++i) mark[out[i]] = u;
    for (auto i = offsets[u]; i < offsets[u + 1]; ++i) {
      const node_id v = out[i];
      for (auto j = offsets[v]; j < offsets[v + 1]; ++j) {
        const node_id w = out[j];
        if (mark[w] == u) {
          ++tri[u];
          ++tri[v];
          ++tri[w];
        }
      }
    }
  }
  return tri;
}

TripletCounts count_triplets(const Graph& g) {
  TripletCounts t;
  const auto tri = triangles_per_node(g);
  for (node_id v = 0; v < g.node_count(); ++v) {
    t.triangles += tri[v];
    const std::uint64_t d = g.degree(v);
    t.triplets += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  t.triangles /= 3;
  return t;
}

namespace {

double clustering_from(std::uint64_t triangles, std::size_t degree) {
  if (degree <= 1) return 0.0;
  const auto d = static_cast<double>(degree);
  return 2.0 * static_cast<double>(triangles) / (d * (d - 1.0));
}

// Bin of c(v) = 2t / (d (d - 1)) among the uniform bins, in exact integer
// arithmetic so that values such as 0.3 never slip into the bin below.
std::size_t clustering_bin(std::uint64_t triangles, std::size_t degree) {
  if (degree <= 1) return 0;
  const std::uint64_t pairs = static_cast<std::uint64_t>(degree) * (degree - 1);
  const std::uint64_t bin = 2 * triangles * clustering_bins / pairs;
  return std::min<std::size_t>(bin, clustering_bins - 1);
}

}  // namespace

double local_clustering(const Graph& g, node_id v) {
  const auto nb = g.neighbors(v);
  std::uint64_t links = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const auto other = g.neighbors(nb[i]);
    // count neighbors of nb[i] that are also neighbors of v and come later
    std::size_t a = i + 1, b = 0;
    while (a < nb.size() && b < other.size()) {
      if (nb[a] < other[b]) ++a;
      else if (other[b] < nb[a]) ++b;
      else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  return clustering_from(links, nb.size());
}

std::vector<double> local_clustering_all(const Graph& g) {
  const auto tri = triangles_per_node(g);
  std::vector<double> c(g.node_count());
  for (node_id v = 0; v < g.node_count(); ++v) c[v] = clustering_from(tri[v], g.degree(v));
  return c;
}

double average_clustering(const Graph& g, const ClusteringOptions& opts) {
  const auto c = local_clustering_all(g);
  double sum = 0;
  std::size_t counted = 0;
  for (node_id v = 0; v < g.node_count(); ++v) {
    if (opts.exclude_low_degree && g.degree(v) <= 1) continue;
    sum += c[v];
    ++counted;
  }
  return counted ? sum / static_cast<double>(counted) : 0.0;
}

Distribution clustering_distribution(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("clustering distribution of an empty graph");
  std::vector<std::uint64_t> counts(clustering_bins, 0);
  const auto tri = triangles_per_node(g);
  for (node_id v = 0; v < g.node_count(); ++v) ++counts[clustering_bin(tri[v], g.degree(v))];
  std::vector<double> support(clustering_bins);
  for (std::size_t i = 0; i < clustering_bins; ++i)
    support[i] = static_cast<double>(i) / static_cast<double>(clustering_bins);
  return Distribution::from_counts(std::move(support), counts);
}

double global_clustering(const Graph& g) {
  const auto t = count_triplets(g);
  if (t.triplets == 0) return 0.0;
  return 3.0 * static_cast<double>(t.triangles) / static_cast<double>(t.triplets);
}

PathLengthResult path_lengths(const Graph& g, const PathOptions& opts) {
  if (g.edge_count() == 0) throw std::invalid_argument("path length of a graph without edges");
  const NodeSet lcc = largest_connected_component(g);
  const auto n = g.node_count();

  PathLengthResult result;
  result.lcc_fraction = static_cast<double>(lcc.size()) / static_cast<double>(n);
  result.exact = opts.mode == PathMode::exact ||
                 (opts.mode == PathMode::automatic && n <= opts.exact_threshold) ||
                 opts.sources >= lcc.size();

  std::vector<node_id> sources(lcc.begin(), lcc.end());
  if (!result.exact) {
    Rng rng(opts.seed);
    for (std::size_t i = 0; i < opts.sources; ++i) {
      const auto j = i + rng.uniform_index(sources.size() - i);
      std::swap(sources[i], sources[j]);
    }
    sources.resize(opts.sources);
  }
  result.sources = sources.size();

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, sources.size()));
  std::vector<std::vector<std::uint64_t>> hist(threads);

  auto worker = [&](unsigned t) {
    std::vector<std::uint32_t> dist(n, static_cast<std::uint32_t>(-1));
    std::vector<node_id> queue;
    queue.reserve(lcc.size());
    auto& h = hist[t];
    for (std::size_t i = t; i < sources.size(); i += threads) {
      const node_id s = sources[i];
      queue.assign(1, s);
      dist[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const node_id x = queue[head];
        const auto dx = dist[x];
        if (dx >= h.size()) h.resize(dx + 1, 0);
        ++h[dx];
        for (node_id y : g.neighbors(x))
          if (dist[y] == static_cast<std::uint32_t>(-1)) {
            dist[y] = dx + 1;
            queue.push_back(y);
          }
      }
      for (node_id x : queue) dist[x] = static_cast<std::uint32_t>(-1);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::vector<std::uint64_t> total;
  for (const auto& h : hist) {
    if (h.size() > total.size()) total.resize(h.size(), 0);
    for (std::size_t d = 0; d < h.size(); ++d) total[d] += h[d];
  }
  std::vector<double> support;
  std::vector<std::uint64_t> counts;
  long double sum = 0;
  for (std::size_t d = 1; d < total.size(); ++d) {
    if (!total[d]) continue;
    support.push_back(static_cast<double>(d));
    counts.push_back(total[d]);
    result.pairs += total[d];
    sum += static_cast<long double>(d) * static_cast<long double>(total[d]);
  }
  result.average = static_cast<double>(sum / static_cast<long double>(result.pairs));
  result.distribution = Distribution::from_counts(std::move(support), counts);
  return result;
}

std::optional<double> assortativity(const Graph& g) {
  if (g.edge_count() == 0) return std::nullopt;
  std::size_t lo = static_cast<std::size_t>(-1), hi = 0;
  long double sum = 0;
  for (node_id v = 0; v < g.node_count(); ++v) {
    const auto d = g.degree(v);
    if (d == 0) continue;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    // every node appears as an endpoint d times
    sum += static_cast<long double>(d) * static_cast<long double>(d);
  }
  if (lo == hi) return std::nullopt;

  const long double endpoints = 2.0L * static_cast<long double>(g.edge_count());
  const long double mean = sum / endpoints;
  long double cov = 0, var = 0;
  for (node_id u = 0; u < g.node_count(); ++u) {
    const long double du = static_cast<long double>(g.degree(u)) - mean;
    if (g.degree(u) == 0) continue;
    var += static_cast<long double>(g.degree(u)) * du * du;
    for (node_id v : g.neighbors(u))
      cov += du * (static_cast<long double>(g.degree(v)) - mean);
  }
  return static_cast<double>(cov / var);
}

Partition::Partition(std::vector<std::uint32_t> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) return;
  const auto max = *std::max_element(labels_.begin(), labels_.end());
  std::vector<char> seen(static_cast<std::size_t>(max) + 1, 0);
  for (auto l : labels_) seen[l] = 1;
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("community labels are not dense");
  count_ = seen.size();
}

Partition Partition::normalize(const std::vector<std::uint32_t>& raw) {
  std::vector<std::uint32_t> relabel;
  std::vector<std::uint32_t> out(raw.size());
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= relabel.size()) relabel.resize(static_cast<std::size_t>(raw[i]) + 1, unset);
    if (relabel[raw[i]] == unset) relabel[raw[i]] = next++;
    out[i] = relabel[raw[i]];
  }
  return Partition(std::move(out));
}

double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.node_count())
    throw std::invalid_argument("partition does not cover every node");
  if (g.edge_count() == 0) throw std::invalid_argument("modularity of a graph without edges");
  const auto k = p.community_count();
  std::vector<std::uint64_t> internal(k, 0), degree(k, 0);
  for (node_id u = 0; u < g.node_count(); ++u) {
    degree[p[u]] += g.degree(u);
    for (node_id v : g.neighbors(u))
      if (u < v && p[u] == p[v]) ++internal[p[u]];
  }
  const double m = static_cast<double>(g.edge_count());
  double q = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = static_cast<double>(degree[c]) / (2.0 * m);
    q += static_cast<double>(internal[c]) / m - share * share;
  }
  return q;
}

PropertyReport compute_properties(const Graph& g, const PropertyOptions& opts) {
  PropertyReport r;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  r.avg_degree = average_degree(g);
  r.degree_distribution = degree_distribution(g);

  const auto tri = triangles_per_node(g);
  std::vector<std::uint64_t> bins(clustering_bins, 0);
  double cc_sum = 0;
  std::size_t cc_counted = 0;
  TripletCounts t;
  for (node_id v = 0; v < g.node_count(); ++v) {
    const auto d = g.degree(v);
    const double c = clustering_from(tri[v], d);
    if (!(opts.clustering.exclude_low_degree && d <= 1)) {
      cc_sum += c;
      ++cc_counted;
    }
    ++bins[clustering_bin(tri[v], d)];
    t.triangles += tri[v];
    t.triplets += static_cast<std::uint64_t>(d) * (d > 0 ? d - 1 : 0) / 2;
  }
  t.triangles /= 3;
  r.avg_clustering = cc_counted ? cc_sum / static_cast<double>(cc_counted) : 0.0;
  std::vector<double> support(clustering_bins);
  for (std::size_t i = 0; i < clustering_bins; ++i)
    support[i] = static_cast<double>(i) / static_cast<double>(clustering_bins);
  r.clustering_distribution = Distribution::from_counts(std::move(support), bins);
  r.global_clustering_defined = t.triplets > 0;
  r.global_clustering =
      t.triplets ? 3.0 * static_cast<double>(t.triangles) / static_cast<double>(t.triplets) : 0.0;

  r.assortativity = assortativity(g);
  if (g.edge_count() > 0) {
    auto paths = path_lengths(g, opts.paths);
    r.avg_path_length = paths.average;
    r.path_length_distribution = std::move(paths.distribution);
    r.path_length_exact = paths.exact;
    r.path_sources = paths.sources;
    r.lcc_fraction = paths.lcc_fraction;

    const Partition p = detect_communities(g, opts.community_seed);
    r.communities = p.community_count();
    r.modularity = modularity(g, p);
  } else {
    r.lcc_fraction = g.node_count() ? 1.0 / static_cast<double>(g.node_count()) : 0.0;
    r.communities = g.node_count();
  }
  return r;
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::degree: return "degree";
    case Property::clustering: return "clustering";
    case Property::path_length: return "path_length";
    case Property::global_clustering: return "global_clustering";
    case Property::assortativity: return "assortativity";
    case Property::modularity: return "modularity";
  }
  return "?";
}

Property parse_property(std::string_view s) {
  for (auto p : all_properties)
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown property '" + std::string(s) + "'");
}

std::optional<double> property_value(const PropertyReport& r, Property p) {
  switch (p) {
    case Property::degree: return r.avg_degree;
    case Property::clustering: return r.avg_clustering;
    case Property::path_length: return r.avg_path_length;
    case Property::global_clustering: return r.global_clustering;
    case Property::assortativity: return r.assortativity;
    case Property::modularity: return r.modularity;
  }
  return std::nullopt;
}

}  // namespace gsample
