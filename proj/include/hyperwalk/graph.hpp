#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyperwalk/error.hpp"

namespace hyperwalk {

using NodeIndex = std::uint32_t;
using TypeId = std::uint32_t;

struct NodeType {
  TypeId id = 0;
  std::string label;
};

struct EdgeType {
  TypeId id = 0;
  std::string label;
  // Ordered as first seen; edges of this type store their endpoints in this order.
  std::pair<TypeId, TypeId> endpoint_types{0, 0};

  bool joins(TypeId a, TypeId b) const noexcept {
    return (endpoint_types.first == a && endpoint_types.second == b) ||
           (endpoint_types.first == b && endpoint_types.second == a);
  }
};

struct Edge {
  NodeIndex u = 0;
  NodeIndex v = 0;
  TypeId type = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline std::uint64_t undirected_key(NodeIndex a, NodeIndex b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Heterogeneous undirected graph with typed nodes and typed edges.
///
/// Immutable once built. Adjacency is stored CSR-style with each node's
/// neighbors sorted by (node type, index), so the neighbors of one type form
/// a contiguous run and per-type counts are offset differences.
class TypedGraph {
 public:
  TypedGraph() = default;

  std::size_t num_nodes() const noexcept { return node_ids_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_node_types() const noexcept { return node_types_.size(); }
  std::size_t num_edge_types() const noexcept { return edge_types_.size(); }

  const std::vector<NodeType>& node_types() const noexcept { return node_types_; }
  const std::vector<EdgeType>& edge_types() const noexcept { return edge_types_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const std::string& node_id(NodeIndex v) const { return node_ids_.at(v); }
  TypeId type_of(NodeIndex v) const noexcept { return node_type_[v]; }
  const std::string& type_label(NodeIndex v) const { return node_types_[node_type_[v]].label; }

  std::optional<NodeIndex> find_node(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<TypeId> find_node_type(std::string_view label) const {
    for (const auto& t : node_types_)
      if (t.label == label) return t.id;
    return std::nullopt;
  }

  std::optional<TypeId> find_edge_type(std::string_view label) const {
    for (const auto& t : edge_types_)
      if (t.label == label) return t.id;
    return std::nullopt;
  }

  std::optional<TypeId> edge_type_between(TypeId a, TypeId b) const {
    for (const auto& t : edge_types_)
      if (t.joins(a, b)) return t.id;
    return std::nullopt;
  }

  std::span<const NodeIndex> neighbors(NodeIndex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeIndex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  /// Neighbors of v whose node type is t, ascending by index. Empty when t is absent.
  std::span<const NodeIndex> neighbors_by_type(NodeIndex v, TypeId t) const noexcept {
    if (t >= node_types_.size()) return {};
    const std::size_t base = static_cast<std::size_t>(v) * (node_types_.size() + 1);
    return {adjacency_.data() + type_offsets_[base + t],
            adjacency_.data() + type_offsets_[base + t + 1]};
  }

  std::size_t type_degree(NodeIndex v, TypeId t) const noexcept {
    return neighbors_by_type(v, t).size();
  }

  bool has_edge(NodeIndex u, NodeIndex v) const noexcept {
    auto run = neighbors_by_type(u, node_type_[v]);
    return std::binary_search(run.begin(), run.end(), v);
  }

  std::size_t count_nodes_of_type(TypeId t) const noexcept {
    return static_cast<std::size_t>(std::count(node_type_.begin(), node_type_.end(), t));
  }

  std::vector<NodeIndex> nodes_of_type(TypeId t) const {
    std::vector<NodeIndex> out;
    for (NodeIndex v = 0; v < num_nodes(); ++v)
      if (node_type_[v] == t) out.push_back(v);
    return out;
  }

  /// Same nodes and edge types as this graph, keeping only `kept` edges.
  TypedGraph with_edges(std::vector<Edge> kept) const {
    TypedGraph g;
    g.node_types_ = node_types_;
    g.edge_types_ = edge_types_;
    g.node_ids_ = node_ids_;
    g.node_type_ = node_type_;
    g.index_ = index_;
    g.edges_ = std::move(kept);
    g.build_adjacency();
    return g;
  }

  friend bool operator==(const TypedGraph& a, const TypedGraph& b) {
    if (a.node_ids_ != b.node_ids_ || a.node_type_ != b.node_type_ || a.edges_ != b.edges_)
      return false;
    if (a.node_types_.size() != b.node_types_.size() ||
        a.edge_types_.size() != b.edge_types_.size())
      return false;
    for (std::size_t i = 0; i < a.node_types_.size(); ++i)
      if (a.node_types_[i].label != b.node_types_[i].label) return false;
    for (std::size_t i = 0; i < a.edge_types_.size(); ++i)
      if (a.edge_types_[i].label != b.edge_types_[i].label ||
          a.edge_types_[i].endpoint_types != b.edge_types_[i].endpoint_types)
        return false;
    return true;
  }

 private:
  friend class GraphBuilder;

  void build_adjacency() {
    const std::size_t n = node_ids_.size();
    const std::size_t num_types = node_types_.size();
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.assign(offsets_[n], 0);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = e.v;
      adjacency_[fill[e.v]++] = e.u;
    }
    type_offsets_.assign(n * (num_types + 1), 0);
    for (std::size_t v = 0; v < n; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
      std::sort(first, last, [this](NodeIndex x, NodeIndex y) {
        return node_type_[x] != node_type_[y] ? node_type_[x] < node_type_[y] : x < y;
      });
      std::size_t* row = type_offsets_.data() + v * (num_types + 1);
      std::size_t pos = offsets_[v];
      for (TypeId t = 0; t < num_types; ++t) {
        row[t] = pos;
        while (pos < offsets_[v + 1] && node_type_[adjacency_[pos]] == t) ++pos;
      }
      row[num_types] = pos;
    }
  }

  std::vector<NodeType> node_types_;
  std::vector<EdgeType> edge_types_;
  std::vector<std::string> node_ids_;
  std::vector<TypeId> node_type_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Edge> edges_;

  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> adjacency_;
  std::vector<std::size_t> type_offsets_;
};

/// Incremental construction with validation. Edge types are inferred from
/// endpoint node types; an explicit label is checked against earlier use.
class GraphBuilder {
 public:
  struct Warnings {
    std::size_t duplicate_edges = 0;
    std::size_t self_loops = 0;
  };

  TypeId add_node_type(std::string_view label) {
    if (auto t = graph_.find_node_type(label)) return *t;
    const auto id = static_cast<TypeId>(graph_.node_types_.size());
    graph_.node_types_.push_back({id, std::string(label)});
    return id;
  }

  NodeIndex add_node(std::string_view id, std::string_view type_label) {
    if (id.empty()) throw Error("empty node id");
    const TypeId t = add_node_type(type_label);
    auto [it, inserted] =
        graph_.index_.emplace(std::string(id), static_cast<NodeIndex>(graph_.node_ids_.size()));
    if (!inserted) {
      if (graph_.node_type_[it->second] != t)
        throw Error("node '" + std::string(id) + "' declared with two types");
      return it->second;
    }
    graph_.node_ids_.emplace_back(id);
    graph_.node_type_.push_back(t);
    return it->second;
  }

  /// Returns false when the edge was dropped (duplicate or self-loop).
  bool add_edge(std::string_view src, std::string_view dst,
                std::optional<std::string_view> label = std::nullopt) {
    auto u = graph_.find_node(src);
    if (!u) throw Error("unknown node id '" + std::string(src) + "'");
    auto v = graph_.find_node(dst);
    if (!v) throw Error("unknown node id '" + std::string(dst) + "'");
    return add_edge(*u, *v, label);
  }

  bool add_edge(NodeIndex u, NodeIndex v, std::optional<std::string_view> label = std::nullopt) {
    if (u >= graph_.node_ids_.size() || v >= graph_.node_ids_.size())
      throw Error("edge endpoint out of range");
    if (u == v) {
      ++warnings_.self_loops;
      return false;
    }
    const TypeId tu = graph_.node_type_[u];
    const TypeId tv = graph_.node_type_[v];
    const TypeId et = resolve_edge_type(tu, tv, label);
    if (!seen_.insert(undirected_key(u, v)).second) {
      ++warnings_.duplicate_edges;
      return false;
    }
    const auto& ends = graph_.edge_types_[et].endpoint_types;
    if (ends.first == tu && ends.second == tv)
      graph_.edges_.push_back({u, v, et});
    else
      graph_.edges_.push_back({v, u, et});
    return true;
  }

  const Warnings& warnings() const noexcept { return warnings_; }

  TypedGraph build() && {
    graph_.build_adjacency();
    seen_.clear();
    return std::move(graph_);
  }

 private:
  TypeId resolve_edge_type(TypeId tu, TypeId tv, std::optional<std::string_view> label) {
    const auto by_pair = graph_.edge_type_between(tu, tv);
    if (label) {
      const auto by_label = graph_.find_edge_type(*label);
      if (by_label) {
        if (!graph_.edge_types_[*by_label].joins(tu, tv))
          throw Error("edge type '" + std::string(*label) + "' joins " +
                      describe(graph_.edge_types_[*by_label]) + ", not " +
                      graph_.node_types_[tu].label + "-" + graph_.node_types_[tv].label);
        return *by_label;
      }
      if (by_pair)
        throw Error("edge type '" + std::string(*label) + "' contradicts inferred type '" +
                    graph_.edge_types_[*by_pair].label + "' for the same node types");
    } else if (by_pair) {
      return *by_pair;
    }
    const auto id = static_cast<TypeId>(graph_.edge_types_.size());
    std::string name = label ? std::string(*label)
                             : graph_.node_types_[tu].label + "-" + graph_.node_types_[tv].label;
    graph_.edge_types_.push_back({id, std::move(name), {tu, tv}});
    return id;
  }

  std::string describe(const EdgeType& t) const {
    return graph_.node_types_[t.endpoint_types.first].label + "-" +
           graph_.node_types_[t.endpoint_types.second].label;
  }

  TypedGraph graph_;
  std::unordered_set<std::uint64_t> seen_;
  Warnings warnings_;
};

namespace detail {

inline std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

struct LoadedGraph {
  TypedGraph graph;
  GraphBuilder::Warnings warnings;
};

/// Reads `node_id<TAB>type` and `src<TAB>dst[<TAB>edge_type]` files.
/// Lines starting with '#' and blank lines are skipped.
inline LoadedGraph load_graph(const std::string& nodes_path, const std::string& edges_path) {
  GraphBuilder builder;
  {
    auto in = detail::open_input(nodes_path);
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
      auto line = detail::trim_right(raw);
      if (line.empty() || line.front() == '#') continue;
      auto cols = detail::split_tabs(line);
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
        throw ParseError(nodes_path, line_no, "expected 'node_id<TAB>type_label'");
      try {
        builder.add_node(cols[0], cols[1]);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(nodes_path, line_no, e.what());
      }
    }
  }
  {
    auto in = detail::open_input(edges_path);
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
      auto line = detail::trim_right(raw);
      if (line.empty() || line.front() == '#') continue;
      auto cols = detail::split_tabs(line);
      if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty() ||
          (cols.size() == 3 && cols[2].empty()))
        throw ParseError(edges_path, line_no, "expected 'src_id<TAB>dst_id[<TAB>edge_type]'");
      try {
        builder.add_edge(cols[0], cols[1],
                         cols.size() == 3 ? std::optional<std::string_view>(cols[2]) : std::nullopt);
      } catch (const Error& e) {
        throw ParseError(edges_path, line_no, e.what());
      }
    }
  }
  auto warnings = builder.warnings();
  return {std::move(builder).build(), warnings};
}

inline void write_nodes(const TypedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    out << g.node_id(v) << '\t' << g.type_label(v) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline void write_edges(const TypedGraph& g, std::span<const Edge> edges, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (const auto& e : edges)
    out << g.node_id(e.u) << '\t' << g.node_id(e.v) << '\t' << g.edge_types()[e.type].label
        << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline void save_graph(const TypedGraph& g, const std::string& nodes_path,
                       const std::string& edges_path) {
  write_nodes(g, nodes_path);
  write_edges(g, g.edges(), edges_path);
}

/// Per node type: degree -> number of nodes of that type with that degree.
using DegreeHistogram = std::vector<std::map<std::size_t, std::size_t>>;

inline DegreeHistogram degree_stats(const TypedGraph& g) {
  DegreeHistogram hist(g.num_node_types());
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) ++hist[g.type_of(v)][g.degree(v)];
  return hist;
}

/// Component label per node (labels dense, in order of first node) and count.
struct Components {
  std::vector<NodeIndex> label;
  std::size_t count = 0;
};

inline Components connected_components(const TypedGraph& g) {
  constexpr auto kUnset = static_cast<NodeIndex>(-1);
  Components c{std::vector<NodeIndex>(g.num_nodes(), kUnset), 0};
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.num_nodes(); ++s) {
    if (c.label[s] != kUnset) continue;
    const auto id = static_cast<NodeIndex>(c.count++);
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      for (NodeIndex w : g.neighbors(v)) {
        if (c.label[w] == kUnset) {
          c.label[w] = id;
          stack.push_back(w);
        }
      }
    }
  }
  return c;
}

}  // namespace hyperwalk
