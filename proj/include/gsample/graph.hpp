#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gsample {

using node_id = std::uint32_t;
using edge = std::pair<node_id, node_id>;

inline constexpr node_id invalid_node = static_cast<node_id>(-1);

/// Raised by the edge-list reader; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct EdgeListFormat;
struct LoadResult;

/// Immutable undirected simple graph in CSR form.
///
/// Node ids are dense in [0, n). Every adjacency list is sorted ascending and
/// free of self-loops and duplicates; u appears in adj(v) iff v appears in
/// adj(u). Optionally carries the external id of every node, so that results
/// can be reported in the ids of the source file.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on n nodes. Self-loops are dropped, parallel and
  /// reversed duplicates are merged. Throws std::out_of_range for ids >= n.
  static Graph from_edges(std::size_t n, std::span<const edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::size_t degree(node_id v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const node_id> neighbors(node_id v) const {
    check(v);
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  /// Binary search on the sorted adjacency of the lower-degree endpoint.
  bool has_edge(node_id u, node_id v) const;

  /// All edges as (u, v) with u < v, sorted lexicographically.
  std::vector<edge> edges() const;

  /// External id of v (v itself when no id table is attached).
  std::int64_t original_id(node_id v) const {
    check(v);
    return original_ids_.empty() ? static_cast<std::int64_t>(v) : original_ids_[v];
  }
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }
  void set_original_ids(std::vector<std::int64_t> ids);

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const node_id> adjacency() const { return neighbors_; }

  /// 64-bit content hash over the CSR arrays; stable across runs and hosts.
  std::uint64_t content_hash() const;

  friend LoadResult load_edge_list_text(std::string_view, const EdgeListFormat&);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  void check(node_id v) const {
    if (v >= node_count())
      throw std::out_of_range("node id " + std::to_string(v) + " out of range");
  }

  std::vector<std::uint64_t> offsets_;
  std::vector<node_id> neighbors_;
  std::vector<std::int64_t> original_ids_;
};

/// Sorted, duplicate-free set of node ids of some host graph.
class NodeSet {
 public:
  NodeSet() = default;

  /// Sorts and validates; throws std::out_of_range if any id >= node_count and
  /// std::invalid_argument on duplicates.
  NodeSet(std::vector<node_id> ids, std::size_t node_count);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(node_id v) const;
  std::span<const node_id> ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<node_id> ids_;
};

struct EdgeListFormat {
  std::string comment_prefixes = "#%";
  /// Empty means any run of spaces or tabs.
  char separator = '\0';
};

struct LoadStats {
  std::size_t raw_lines = 0;     ///< edge lines parsed
  std::size_t comment_lines = 0;
  std::size_t self_loops = 0;    ///< dropped
  std::size_t duplicates = 0;    ///< merged, including reversed pairs
};

struct LoadResult {
  Graph graph;
  LoadStats stats;
};

/// Reads "u v" lines; extra columns (weights, timestamps) are ignored.
/// Raw ids are remapped to [0, n) in ascending raw-id order, so loading a
/// normalized dump reproduces its ids exactly.
LoadResult load_edge_list(std::istream& in, const EdgeListFormat& format = {});
LoadResult load_edge_list(const std::filesystem::path& path,
                          const EdgeListFormat& format = {});
LoadResult load_edge_list_text(std::string_view text, const EdgeListFormat& format);
inline LoadResult load_edge_list_text(std::string_view text) {
  return load_edge_list_text(text, EdgeListFormat{});
}

/// Writes "# nodes N edges M" followed by sorted "u v" lines with u < v.
/// With use_original_ids the external ids are written instead of dense ids.
void write_edge_list(std::ostream& out, const Graph& g, bool use_original_ids = false);

/// Subgraph on `nodes`, re-indexed in ascending id order. The result's
/// original ids are the host graph's original ids of the kept nodes.
Graph induced_subgraph(const Graph& g, const NodeSet& nodes);

/// Connected component labels, numbered in order of their smallest node.
std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* count = nullptr);

/// Largest connected component; ties go to the component with the smallest id.
NodeSet largest_connected_component(const Graph& g);

}  // namespace gsample
