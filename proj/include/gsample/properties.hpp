#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gsample/distribution.hpp"
#include "gsample/graph.hpp"

namespace gsample {

// ---------------------------------------------------------------------------
// Degree

/// 2m / n. Throws std::invalid_argument on an empty graph.
double average_degree(const Graph& g);

/// P(d) = n_d / n over the observed degrees.
Distribution degree_distribution(const Graph& g);

// ---------------------------------------------------------------------------
// Clustering

/// Triangles through every node, by intersecting degree-oriented adjacency.
std::vector<std::uint64_t> triangles_per_node(const Graph& g);

struct TripletCounts {
  std::uint64_t triangles = 0;  ///< each triangle once
  std::uint64_t triplets = 0;   ///< sum over v of C(d_v, 2)
};
TripletCounts count_triplets(const Graph& g);

/// c(v) = 2 e_v / (d_v (d_v - 1)); 0 when d_v <= 1.
double local_clustering(const Graph& g, node_id v);
std::vector<double> local_clustering_all(const Graph& g);

struct ClusteringOptions {
  /// Leave nodes of degree <= 1 out of the average instead of counting them as 0.
  bool exclude_low_degree = false;
};
double average_clustering(const Graph& g, const ClusteringOptions& opts = {});

inline constexpr std::size_t clustering_bins = 100;

/// Local clustering binned into 100 uniform bins on [0, 1]; the support lists
/// every bin by its left edge, and c = 1 falls in the last bin.
Distribution clustering_distribution(const Graph& g);

/// 3 * triangles / triplets, or 0 when the graph has no triplet at all.
double global_clustering(const Graph& g);

// ---------------------------------------------------------------------------
// Path length

enum class PathMode { automatic, exact, sampled };

struct PathOptions {
  PathMode mode = PathMode::automatic;
  std::size_t sources = 256;
  std::uint64_t seed = 1;
  /// automatic mode runs exact BFS from every node up to this many nodes.
  std::size_t exact_threshold = 5000;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct PathLengthResult {
  double average = 0;
  Distribution distribution;  ///< over hop counts
  bool exact = false;
  std::size_t sources = 0;
  std::uint64_t pairs = 0;    ///< ordered (source, target) pairs counted
  double lcc_fraction = 0;    ///< |LCC| / n
};

/// Mean BFS distance over ordered pairs inside the largest connected
/// component. Sampled mode averages over BFS runs from `sources` distinct
/// uniform LCC nodes. Throws std::invalid_argument when g has no edge.
PathLengthResult path_lengths(const Graph& g, const PathOptions& opts = {});

inline double average_path_length(const Graph& g, const PathOptions& opts = {}) {
  return path_lengths(g, opts).average;
}

inline Distribution path_length_distribution(const Graph& g, const PathOptions& opts = {}) {
  return path_lengths(g, opts).distribution;
}

// ---------------------------------------------------------------------------
// Degree correlation

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. nullopt when there are no edges or every endpoint has the same degree.
std::optional<double> assortativity(const Graph& g);

// ---------------------------------------------------------------------------
// Communities

/// Community label per node, labels dense in [0, count).
class Partition {
 public:
  Partition() = default;
  /// Throws std::invalid_argument when labels are not dense.
  explicit Partition(std::vector<std::uint32_t> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t community_count() const { return count_; }
  std::uint32_t operator[](node_id v) const { return labels_[v]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

  /// Relabels arbitrary ids densely in order of first appearance.
  static Partition normalize(const std::vector<std::uint32_t>& raw);

 private:
  std::vector<std::uint32_t> labels_;
  std::size_t count_ = 0;
};

/// Louvain modularity maximization; the node visiting order is shuffled with
/// `seed`, everything else is deterministic.
Partition detect_communities(const Graph& g, std::uint64_t seed = 1);

/// Q = sum over communities of (m_c / m - (D_c / 2m)^2). Throws
/// std::invalid_argument when the partition does not cover g or g has no edge.
double modularity(const Graph& g, const Partition& p);

// ---------------------------------------------------------------------------
// Full report

struct PropertyOptions {
  PathOptions paths;
  ClusteringOptions clustering;
  std::uint64_t community_seed = 1;
};

struct PropertyReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double avg_degree = 0;
  double avg_clustering = 0;
  std::optional<double> avg_path_length;
  double global_clustering = 0;
  std::optional<double> assortativity;
  std::optional<double> modularity;

  Distribution degree_distribution;
  Distribution clustering_distribution;
  Distribution path_length_distribution;  ///< empty when there is no edge

  bool global_clustering_defined = false;  ///< false: no triplets, value forced to 0
  bool path_length_exact = false;
  std::size_t path_sources = 0;
  double lcc_fraction = 0;
  std::size_t communities = 0;
};

PropertyReport compute_properties(const Graph& g, const PropertyOptions& opts = {});

/// The six scalar properties in reporting order.
enum class Property { degree, clustering, path_length, global_clustering, assortativity, modularity };
inline constexpr Property all_properties[] = {Property::degree,
                                              Property::clustering,
                                              Property::path_length,
                                              Property::global_clustering,
                                              Property::assortativity,
                                              Property::modularity};
std::string_view to_string(Property p);
Property parse_property(std::string_view s);

/// Scalar value of p in the report; nullopt when undefined for that graph.
std::optional<double> property_value(const PropertyReport& r, Property p);

}  // namespace gsample
