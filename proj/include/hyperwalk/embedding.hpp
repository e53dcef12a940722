#pragma once

#include <charconv>
#include <fstream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "hyperwalk/error.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/lorentz.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

/// One point of H^d per graph node, stored row-major as d+1 ambient coordinates.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t num_nodes, std::size_t dim)
      : num_nodes_(num_nodes), dim_(dim), coords_(num_nodes * (dim + 1), 0.0) {
    if (dim < 1) throw Error("embedding dimension must be at least 1");
    for (std::size_t v = 0; v < num_nodes; ++v) coords_[v * (dim + 1) + dim] = 1.0;
  }

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t ambient_dim() const noexcept { return dim_ + 1; }

  std::span<double> point(NodeIndex v) noexcept {
    return {coords_.data() + static_cast<std::size_t>(v) * (dim_ + 1), dim_ + 1};
  }
  std::span<const double> point(NodeIndex v) const noexcept {
    return {coords_.data() + static_cast<std::size_t>(v) * (dim_ + 1), dim_ + 1};
  }

  const std::vector<double>& data() const noexcept { return coords_; }

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::size_t num_nodes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Spatial coordinates uniform in (-init_scale, init_scale), lifted onto H^d.
inline EmbeddingTable init_embeddings(std::size_t num_nodes, std::size_t dim, double init_scale,
                                      Engine& rng) {
  if (dim < 2) throw Error("embedding dimension must be at least 2");
  EmbeddingTable table(num_nodes, dim);
  for (NodeIndex v = 0; v < num_nodes; ++v) {
    auto x = table.point(v);
    for (std::size_t i = 0; i < dim; ++i) x[i] = (2.0 * uniform01(rng) - 1.0) * init_scale;
    lorentz::renormalize(x);
  }
  return table;
}

inline EmbeddingTable init_embeddings(const TypedGraph& g, std::size_t dim, double init_scale,
                                      Engine& rng) {
  return init_embeddings(g.num_nodes(), dim, init_scale, rng);
}

namespace detail {
inline void append_double(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, res.ptr);
}
}  // namespace detail

/// `node_id<TAB>type<TAB>x_1<TAB>...<TAB>x_{d+1}`, shortest round-trip decimals.
inline void write_embeddings(const TypedGraph& g, const EmbeddingTable& table,
                             const std::string& path) {
  if (table.num_nodes() != g.num_nodes()) throw Error("embedding table does not match graph");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  std::string line;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    line.clear();
    line += g.node_id(v);
    line += '\t';
    line += g.type_label(v);
    for (double c : table.point(v)) {
      line += '\t';
      detail::append_double(line, c);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

/// Reads an embedding file and orders rows by the graph's node indices.
/// Every graph node must be present exactly once with a consistent type.
/// expected_dim = 0 accepts whatever dimension the file has.
inline EmbeddingTable read_embeddings(const TypedGraph& g, const std::string& path,
                                      std::size_t expected_dim = 0) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  EmbeddingTable table;
  std::vector<bool> seen(g.num_nodes(), false);
  std::string raw;
  std::size_t dim = 0;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    auto line = hyperwalk::detail::trim_right(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = hyperwalk::detail::split_tabs(line);
    if (cols.size() < 5) throw ParseError(path, line_no, "expected node id, type and >= 3 coordinates");
    if (dim == 0) {
      dim = cols.size() - 3;
      if (expected_dim != 0 && dim != expected_dim)
        throw ParseError(path, line_no,
                         "file has dimension " + std::to_string(dim) + ", expected " +
                             std::to_string(expected_dim));
      table = EmbeddingTable(g.num_nodes(), dim);
    } else if (cols.size() - 3 != dim) {
      throw ParseError(path, line_no, "inconsistent coordinate count");
    }
    const auto v = g.find_node(cols[0]);
    if (!v) throw ParseError(path, line_no, "unknown node id '" + std::string(cols[0]) + "'");
    if (cols[1] != g.type_label(*v))
      throw ParseError(path, line_no, "type mismatch for node '" + std::string(cols[0]) + "'");
    if (seen[*v]) throw ParseError(path, line_no, "duplicate node '" + std::string(cols[0]) + "'");
    seen[*v] = true;
    auto x = table.point(*v);
    for (std::size_t i = 0; i <= dim; ++i) {
      const auto tok = cols[i + 2];
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x[i]);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(path, line_no, "bad coordinate '" + std::string(tok) + "'");
    }
    if (!lorentz::on_manifold(x, 1e-6))
      throw ParseError(path, line_no, "point is not on the hyperboloid");
  }
  if (dim == 0) throw Error("'" + path + "' contains no embeddings");
  for (NodeIndex v = 0; v < g.num_nodes(); ++v)
    if (!seen[v]) throw Error("'" + path + "' has no row for node '" + g.node_id(v) + "'");
  return table;
}

}  // namespace hyperwalk
