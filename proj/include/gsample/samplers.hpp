#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsample/generators.hpp"
#include "gsample/graph.hpp"

namespace gsample {

enum class Method { frontier, expansion, rank_degree, list, hybrid_jump };
enum class FinalizeMode { collected, induced };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);
std::string_view to_string(FinalizeMode m);
FinalizeMode parse_finalize_mode(std::string_view s);

/// Edge set a method produces on its own: LS induces over its nodes, the
/// others keep the edges they walked.
FinalizeMode native_mode(Method m);

inline constexpr Method all_methods[] = {Method::frontier, Method::expansion,
                                         Method::rank_degree, Method::list,
                                         Method::hybrid_jump};

struct SamplerConfig {
  Method method = Method::list;
  double fraction = 0.1;  ///< phi in (0, 1]
  std::uint64_t seed = 1;
  FinalizeMode mode = FinalizeMode::induced;

  std::size_t walkers = 10;    ///< FS: number of dependent walkers
  std::size_t rd_seeds = 10;   ///< RD: initial seed count s
  double rd_top = 0.1;         ///< RD: top fraction rho in (0, 1]
  std::optional<double> jump_probability;  ///< HJ: alpha; default min(1, 1/avg degree)
  std::size_t degree_probes = 1000;        ///< HJ: uniform probes for the degree estimate
  std::size_t jump_depth = 2;              ///< HJ: BFS depth of the jump list

  /// Replaces the first uniform seed draws (FS walkers, RD seeds, start node).
  std::vector<node_id> start_nodes;

  bool record_trace = false;
  bool record_walker_choices = false;  ///< FS only

  /// Throws ConfigError for out-of-range parameters or phi * n < 1.
  void validate(std::size_t node_count) const;
};

/// ceil(phi * n), guarded against representation error in phi.
std::size_t sample_budget(double fraction, std::size_t node_count);

enum class StepKind : std::uint8_t { seed, restart, traverse, reject, jump };

/// One traversal event. seed/restart carry only `to`; traverse is an edge the
/// sampler walked and collected; reject is an MH proposal that was declined;
/// jump moves from the jump-list origin to a node within jump_depth hops.
struct Step {
  StepKind kind;
  node_id from;
  node_id to;
  friend bool operator==(const Step&, const Step&) = default;
};

/// FS walker selection: degrees of all walkers at the time, and the pick.
struct WalkerChoice {
  std::vector<std::uint32_t> degrees;
  std::uint32_t chosen;
};

struct Telemetry {
  std::size_t steps = 0;
  std::size_t restarts = 0;
  std::size_t trimmed = 0;
  std::size_t walkers = 0;         ///< FS walkers actually used
  std::size_t proposals = 0;       ///< HJ
  std::size_t acceptances = 0;     ///< HJ
  std::size_t jumps = 0;           ///< HJ
  double estimated_degree = 0;     ///< HJ
  double jump_probability = 0;     ///< HJ
  std::vector<Step> trace;
  std::vector<WalkerChoice> walker_choices;
};

struct Sample {
  Method method = Method::list;
  double fraction = 0;
  std::uint64_t seed = 0;
  FinalizeMode mode = FinalizeMode::induced;
  std::size_t budget = 0;
  std::vector<node_id> nodes;  ///< V_s in order of first visit
  std::vector<edge> edges;     ///< E_s, (u, v) with u < v, sorted
  Telemetry telemetry;

  NodeSet node_set(std::size_t host_node_count) const {
    return NodeSet(nodes, host_node_count);
  }
};

Sample frontier_sample(const Graph& g, const SamplerConfig& cfg);
Sample expansion_sample(const Graph& g, const SamplerConfig& cfg);
Sample rank_degree_sample(const Graph& g, const SamplerConfig& cfg);
Sample list_sample(const Graph& g, const SamplerConfig& cfg);
Sample hybrid_jump_sample(const Graph& g, const SamplerConfig& cfg);

/// Dispatches on cfg.method.
Sample sample_graph(const Graph& g, const SamplerConfig& cfg);

/// Trims the most recently added nodes (and their edges) down to the budget,
/// then keeps the collected edges or replaces them with the induced edge set.
Sample finalize(const Graph& g, Sample raw, FinalizeMode mode);

/// The sample as a graph over its own nodes, re-indexed in ascending host id.
Graph sample_to_graph(const Graph& g, const Sample& s);

/// Replays a recorded trace against g and checks the sample contract. Returns
/// a description of the first violation, or nullopt when everything holds.
std::optional<std::string> replay_check(const Graph& g, const Sample& s,
                                        std::size_t jump_depth = 2);

}  // namespace gsample
