#include "gsample/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "gsample/rng.hpp"

namespace gsample {

namespace {

std::uint64_t pack(node_id u, node_id v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Builds CSR from packed (u < v) keys that are already sorted and unique.
void build_csr(std::size_t n, const std::vector<std::uint64_t>& keys,
               std::vector<std::uint64_t>& offsets, std::vector<node_id>& nbrs) {
  offsets.assign(n + 1, 0);
  for (auto k : keys) {
    ++offsets[(k >> 32) + 1];
    ++offsets[(k & 0xffffffffULL) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  nbrs.resize(offsets[n]);
  std::vector<std::uint64_t> pos(offsets.begin(), offsets.end() - 1);
  // Keys sorted by (u, v): the pass over low endpoints fills every list with
  // smaller neighbors first in ascending order, then the high endpoints.
  for (auto k : keys) {
    const auto u = static_cast<node_id>(k >> 32);
    const auto v = static_cast<node_id>(k & 0xffffffffULL);
    nbrs[pos[v]++] = u;
  }
  for (auto k : keys) {
    const auto u = static_cast<node_id>(k >> 32);
    const auto v = static_cast<node_id>(k & 0xffffffffULL);
    nbrs[pos[u]++] = v;
  }
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const edge> edges) {
  if (n >= invalid_node) throw std::length_error("too many nodes");
  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u != v) keys.push_back(pack(u, v));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  Graph g;
  build_csr(n, keys, g.offsets_, g.neighbors_);
  return g;
}

bool Graph::has_edge(node_id u, node_id v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<edge> Graph::edges() const {
  std::vector<edge> out;
  out.reserve(edge_count());
  for (node_id u = 0; u < node_count(); ++u)
    for (node_id v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

void Graph::set_original_ids(std::vector<std::int64_t> ids) {
  if (!ids.empty() && ids.size() != node_count())
    throw std::invalid_argument("original id table size does not match node count");
  original_ids_ = std::move(ids);
}

std::uint64_t Graph::content_hash() const {
  std::uint64_t h = hash_combine(0x6773616d706c65ULL, node_count());
  for (auto o : offsets_) h = hash_combine(h, o);
  for (auto v : neighbors_) h = hash_combine(h, v);
  return h;
}

NodeSet::NodeSet(std::vector<node_id> ids, std::size_t node_count) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (!ids_.empty() && ids_.back() >= node_count)
    throw std::out_of_range("node id " + std::to_string(ids_.back()) + " out of range");
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw std::invalid_argument("duplicate node id in node set");
}

bool NodeSet::contains(node_id v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

LoadResult load_edge_list_text(std::string_view text, const EdgeListFormat& format) {
  LoadResult result;
  auto& stats = result.stats;
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;

  auto is_sep = [&](char c) {
    return format.separator == '\0' ? is_blank(c) : (c == format.separator || is_blank(c));
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::size_t i = 0;
    while (i < line.size() && is_blank(line[i])) ++i;
    if (i == line.size()) continue;
    if (format.comment_prefixes.find(line[i]) != std::string::npos) {
      ++stats.comment_lines;
      continue;
    }

    std::int64_t ids[2];
    for (int t = 0; t < 2; ++t) {
      while (i < line.size() && is_sep(line[i])) ++i;
      std::size_t j = i;
      while (j < line.size() && !is_sep(line[j])) ++j;
      if (i == j) throw ParseError(line_no, "expected two node ids");
      auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, ids[t]);
      if (ec != std::errc{} || ptr != line.data() + j || ids[t] < 0)
        throw ParseError(line_no, "invalid node id '" + std::string(line.substr(i, j - i)) + "'");
      i = j;
    }
    ++stats.raw_lines;
    if (ids[0] == ids[1]) {
      ++stats.self_loops;
      continue;
    }
    raw.emplace_back(ids[0], ids[1]);
  }

  if (stats.raw_lines == 0) throw std::invalid_argument("edge list is empty");
  if (raw.empty()) throw std::invalid_argument("edge list contains only self-loops");

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() >= invalid_node) throw std::length_error("too many nodes");

  auto remap = [&](std::int64_t x) {
    return static_cast<node_id>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<std::uint64_t> keys;
  keys.reserve(raw.size());
  for (auto [a, b] : raw) keys.push_back(pack(remap(a), remap(b)));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  stats.duplicates = raw.size() - keys.size();

  build_csr(ids.size(), keys, result.graph.offsets_, result.graph.neighbors_);
  result.graph.original_ids_ = std::move(ids);
  return result;
}

LoadResult load_edge_list(std::istream& in, const EdgeListFormat& format) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_edge_list_text(text, format);
}

LoadResult load_edge_list(const std::filesystem::path& path, const EdgeListFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_edge_list(in, format);
}

void write_edge_list(std::ostream& out, const Graph& g, bool use_original_ids) {
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  std::string buf;
  for (node_id u = 0; u < g.node_count(); ++u) {
    for (node_id v : g.neighbors(u)) {
      if (v < u) continue;
      if (use_original_ids)
        buf += std::to_string(g.original_id(u)) + ' ' + std::to_string(g.original_id(v));
      else
        buf += std::to_string(u) + ' ' + std::to_string(v);
      buf += '\n';
      if (buf.size() > (1 << 16)) {
        out << buf;
        buf.clear();
      }
    }
  }
  out << buf;
}

Graph induced_subgraph(const Graph& g, const NodeSet& nodes) {
  if (!nodes.empty() && nodes.ids().back() >= g.node_count())
    throw std::out_of_range("node set does not belong to this graph");
  std::vector<node_id> local(g.node_count(), invalid_node);
  node_id next = 0;
  for (node_id v : nodes) local[v] = next++;

  std::vector<edge> edges;
  for (node_id v : nodes)
    for (node_id w : g.neighbors(v))
      if (v < w && local[w] != invalid_node) edges.emplace_back(local[v], local[w]);

  Graph sub = Graph::from_edges(nodes.size(), edges);
  std::vector<std::int64_t> ids;
  ids.reserve(nodes.size());
  for (node_id v : nodes) ids.push_back(g.original_id(v));
  sub.set_original_ids(std::move(ids));
  return sub;
}

std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* count) {
  const auto n = g.node_count();
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(n, unset);
  std::vector<node_id> queue;
  std::uint32_t next = 0;
  for (node_id s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (node_id w : g.neighbors(queue[head]))
        if (label[w] == unset) {
          label[w] = next;
          queue.push_back(w);
        }
    ++next;
  }
  if (count) *count = next;
  return label;
}

NodeSet largest_connected_component(const Graph& g) {
  std::size_t count = 0;
  auto label = component_labels(g, &count);
  if (count == 0) return {};
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : label) ++sizes[l];
  // Labels follow the smallest member id, so the first maximum wins ties.
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<node_id> ids;
  ids.reserve(sizes[best]);
  for (node_id v = 0; v < g.node_count(); ++v)
    if (label[v] == best) ids.push_back(v);
  return NodeSet(std::move(ids), g.node_count());
}

}  // namespace gsample
