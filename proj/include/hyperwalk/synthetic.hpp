#pragma once

// Small synthetic heterogeneous graphs for demos, tests and benchmarks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk::synthetic {

struct BlockGraphConfig {
  std::vector<std::string> type_labels{"A", "B", "C"};
  std::size_t nodes_per_type_per_block = 100;
  std::size_t blocks = 2;
  double p_in = 0.2;    // cross-type edge probability inside a block
  double p_out = 0.01;  // cross-type edge probability across blocks
  std::uint64_t seed = 0;
};

/// Planted-partition graph with edges only between distinct node types.
/// Node ids are "<type><block>_<i>".
inline TypedGraph block_graph(const BlockGraphConfig& cfg) {
  GraphBuilder b;
  Engine rng = SeedSequence(cfg.seed).stream("synthetic.block");
  const std::size_t num_types = cfg.type_labels.size();
  // nodes[type][block] -> indices
  std::vector<std::vector<std::vector<NodeIndex>>> nodes(
      num_types, std::vector<std::vector<NodeIndex>>(cfg.blocks));
  for (std::size_t t = 0; t < num_types; ++t)
    for (std::size_t blk = 0; blk < cfg.blocks; ++blk)
      for (std::size_t i = 0; i < cfg.nodes_per_type_per_block; ++i)
        nodes[t][blk].push_back(b.add_node(
            cfg.type_labels[t] + std::to_string(blk) + "_" + std::to_string(i), cfg.type_labels[t]));
  for (std::size_t t1 = 0; t1 < num_types; ++t1)
    for (std::size_t t2 = t1 + 1; t2 < num_types; ++t2)
      for (std::size_t b1 = 0; b1 < cfg.blocks; ++b1)
        for (std::size_t b2 = 0; b2 < cfg.blocks; ++b2) {
          const double p = b1 == b2 ? cfg.p_in : cfg.p_out;
          for (NodeIndex u : nodes[t1][b1])
            for (NodeIndex v : nodes[t2][b2])
              if (uniform01(rng) < p) b.add_edge(u, v);
        }
  return std::move(b).build();
}

struct SkewedGraphConfig {
  std::vector<std::string> type_labels{"A", "B", "C"};
  std::vector<std::size_t> type_sizes{214, 64, 22};  // 10:3:1 over 300 nodes
  double edge_probability = 0.05;
  std::uint64_t seed = 0;
};

/// Type-agnostic random graph (every pair linked with the same probability),
/// patched so every node has at least one neighbor of every type.
inline TypedGraph skewed_type_graph(const SkewedGraphConfig& cfg) {
  GraphBuilder b;
  Engine rng = SeedSequence(cfg.seed).stream("synthetic.skewed");
  std::vector<std::vector<NodeIndex>> by_type(cfg.type_labels.size());
  std::vector<NodeIndex> all;
  for (std::size_t t = 0; t < cfg.type_labels.size(); ++t)
    for (std::size_t i = 0; i < cfg.type_sizes.at(t); ++i) {
      const NodeIndex v = b.add_node(cfg.type_labels[t] + std::to_string(i), cfg.type_labels[t]);
      by_type[t].push_back(v);
      all.push_back(v);
    }
  std::vector<std::vector<bool>> has_type(all.size(), std::vector<bool>(by_type.size(), false));
  std::vector<std::size_t> type_of(all.size());
  for (std::size_t t = 0; t < by_type.size(); ++t)
    for (NodeIndex v : by_type[t]) type_of[v] = t;
  auto link = [&](NodeIndex u, NodeIndex v) {
    if (b.add_edge(u, v)) {
      has_type[u][type_of[v]] = true;
      has_type[v][type_of[u]] = true;
    }
  };
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (uniform01(rng) < cfg.edge_probability) link(all[i], all[j]);
  for (NodeIndex v : all)
    for (std::size_t t = 0; t < by_type.size(); ++t)
      while (!has_type[v][t]) link(v, by_type[t][uniform_below(rng, by_type[t].size())]);
  return std::move(b).build();
}

struct BibliographicConfig {
  std::size_t authors = 400;
  std::size_t papers = 600;
  std::size_t venues = 8;
  double productivity_exponent = 2.1;  // P(k papers) ~ k^-exponent
  std::size_t max_authors_per_paper = 3;
  std::uint64_t seed = 0;
};

/// Author-paper-venue graph where author degrees follow a power law: each
/// paper picks its authors with probability proportional to a Pareto-drawn
/// productivity weight, and exactly one venue.
inline TypedGraph bibliographic_graph(const BibliographicConfig& cfg) {
  GraphBuilder b;
  Engine rng = SeedSequence(cfg.seed).stream("synthetic.biblio");
  std::vector<NodeIndex> authors, papers, venues;
  for (std::size_t i = 0; i < cfg.authors; ++i) authors.push_back(b.add_node("a" + std::to_string(i), "A"));
  for (std::size_t i = 0; i < cfg.papers; ++i) papers.push_back(b.add_node("p" + std::to_string(i), "P"));
  for (std::size_t i = 0; i < cfg.venues; ++i) venues.push_back(b.add_node("v" + std::to_string(i), "V"));

  std::vector<double> cumulative(cfg.authors);
  double total = 0.0;
  for (std::size_t i = 0; i < cfg.authors; ++i) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    total += std::pow(u, -1.0 / (cfg.productivity_exponent - 1.0));
    cumulative[i] = total;
  }
  auto pick_author = [&] {
    const double r = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    const auto i = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(cfg.authors) - 1));
    return authors[i];
  };
  for (NodeIndex p : papers) {
    const std::size_t k = 1 + uniform_below(rng, cfg.max_authors_per_paper);
    for (std::size_t j = 0; j < k; ++j) b.add_edge(p, pick_author());
    b.add_edge(p, venues[uniform_below(rng, venues.size())]);
  }
  // Keep every author attached to at least one paper.
  for (NodeIndex a : authors) b.add_edge(papers[uniform_below(rng, papers.size())], a);
  return std::move(b).build();
}

}  // namespace hyperwalk::synthetic
