#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gsample/graph.hpp"

namespace gsample {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GeneratorModel { forest_fire, small_world, mixed };

std::string_view to_string(GeneratorModel m);
GeneratorModel parse_generator_model(std::string_view s);

/// Forward-burning probability that gives an average degree of about 16.2
/// (2.43M edges) at n = 300,000. The fire densifies with n, so the same value
/// gives about 14 at n = 10,000.
inline constexpr double default_forest_fire_p = 0.486;

/// Rewiring probability that brings the k = 16 ring down to an average
/// clustering coefficient of about 0.37.
inline constexpr double default_small_world_p = 0.19;

struct GeneratorConfig {
  GeneratorModel model = GeneratorModel::small_world;
  std::size_t nodes = 1000;
  std::uint64_t seed = 1;

  double forward_burn = default_forest_fire_p;  ///< FF: p_f in (0, 1)
  std::size_t ring_degree = 16;                 ///< SW: k, even
  double rewire = default_small_world_p;        ///< SW: p_r in [0, 1]
  std::size_t edges_per_node = 8;               ///< MM: k_mm
  double preferential = 0.5;                    ///< MM: beta in [0, 1]

  /// Throws ConfigError when a parameter is out of range.
  void validate() const;
};

Graph generate(const GeneratorConfig& config);

/// Forest fire on an undirected graph: every new node links to a uniformly
/// chosen ambassador and then burns outward, taking a geometric number (mean
/// p / (1 - p)) of the unburned neighbors of each burned node.
Graph forest_fire(std::size_t n, double forward_burn, std::uint64_t seed);

/// Watts-Strogatz: ring lattice with k/2 neighbors per side, every lattice edge
/// rewired with probability p to a uniform endpoint (no loops or duplicates).
Graph small_world(std::size_t n, std::size_t k, double rewire, std::uint64_t seed);

/// Growth model starting from a (k + 1)-clique; every new node attaches k
/// edges to distinct existing nodes, each endpoint chosen degree-proportionally
/// with probability beta and uniformly otherwise.
Graph mixed_model(std::size_t n, std::size_t k, double beta, std::uint64_t seed);

struct CalibrationResult {
  double parameter = 0;
  double average_degree = 0;
  int iterations = 0;
};

/// Bisection on a parameter in [lo, hi] such that the average degree of
/// build(parameter) hits target. build must be non-decreasing in expectation.
/// Returns the closest parameter seen when the tolerance is never met.
template <typename Build>
CalibrationResult calibrate(Build&& build, double target, double lo, double hi,
                            double tolerance = 0.01, int max_iterations = 40) {
  CalibrationResult best;
  double best_error = HUGE_VAL;
  for (int i = 1; i <= max_iterations; ++i) {
    const double p = 0.5 * (lo + hi);
    const Graph g = build(p);
    const double avg = 2.0 * static_cast<double>(g.edge_count()) /
                       static_cast<double>(g.node_count());
    if (std::abs(avg - target) < best_error) {
      best_error = std::abs(avg - target);
      best.parameter = p;
      best.average_degree = avg;
    }
    best.iterations = i;
    if (best_error <= tolerance) break;
    (avg < target ? lo : hi) = p;
  }
  return best;
}

/// Calibrates the forest-fire burn probability against a target average degree.
/// The search stays in [0.05, 0.5]; above that the fire burns most of the graph.
CalibrationResult calibrate_forest_fire(double target_average_degree, std::size_t n = 10000,
                                        std::uint64_t seed = 1);

}  // namespace gsample
