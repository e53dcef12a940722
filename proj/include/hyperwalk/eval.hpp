#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/embedding.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/lorentz.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

struct AucReport {
  std::string edge_type;
  std::size_t dimension = 0;
  double auc = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  bool negatives_sampled = false;
};

inline void to_json(nlohmann::json& j, const AucReport& r) {
  j = {{"edge_type", r.edge_type}, {"dimension", r.dimension}, {"auc", r.auc},
       {"n_pos", r.n_pos},         {"n_neg", r.n_neg},         {"negatives_sampled", r.negatives_sampled}};
}

inline void from_json(const nlohmann::json& j, AucReport& r) {
  j.at("edge_type").get_to(r.edge_type);
  j.at("dimension").get_to(r.dimension);
  j.at("auc").get_to(r.auc);
  j.at("n_pos").get_to(r.n_pos);
  j.at("n_neg").get_to(r.n_neg);
  r.negatives_sampled = j.value("negatives_sampled", false);
}

/// Higher means more likely linked: the negated hyperbolic distance.
inline double score_pair(const EmbeddingTable& emb, NodeIndex u, NodeIndex v) {
  if (u >= emb.num_nodes() || v >= emb.num_nodes()) throw Error("score_pair: unknown node");
  return -lorentz::distance(emb.point(u), emb.point(v));
}

/// Mann-Whitney AUC, ties counted half, via one sort of the pooled scores.
inline double auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw Error("auc: both score lists must be nonempty");
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });
  // Twice the U statistic, kept integral: each positive earns 2 per lower
  // negative and 1 per tied negative.
  std::uint64_t twice_u = 0;
  std::uint64_t neg_below = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::uint64_t p = 0, n = 0;
    while (j < all.size() && all[j].score == all[i].score) {
      (all[j].positive ? p : n) += 1;
      ++j;
    }
    twice_u += 2 * p * neg_below + p * n;
    neg_below += n;
    i = j;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

namespace detail {

inline void check_embedding(const TypedGraph& g, const EmbeddingTable& emb) {
  if (emb.num_nodes() != g.num_nodes()) throw Error("embedding table does not cover the graph");
}

inline std::size_t count_edges_of_type(const TypedGraph& g, TypeId t) {
  return static_cast<std::size_t>(std::count_if(g.edges().begin(), g.edges().end(),
                                                [t](const Edge& e) { return e.type == t; }));
}

// Uniform type-compatible pair (x of type a, y of type b, x != y) that is
// not an edge of g. nullopt after too many rejections.
inline std::optional<Edge> sample_non_edge(const TypedGraph& g, const EdgeType& et,
                                           std::span<const NodeIndex> side_a,
                                           std::span<const NodeIndex> side_b, Engine& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const NodeIndex x = side_a[uniform_below(rng, side_a.size())];
    const NodeIndex y = side_b[uniform_below(rng, side_b.size())];
    if (x == y || g.has_edge(x, y)) continue;
    return Edge{x, y, et.id};
  }
  return std::nullopt;
}

}  // namespace detail

/// Network reconstruction for one edge type: all edges of that type against
/// all type-compatible non-edges, or a uniform sample of max_neg of them when
/// there are more.
inline AucReport reconstruct(const TypedGraph& g, const EmbeddingTable& emb, TypeId t,
                             std::size_t max_neg, Engine& rng) {
  detail::check_embedding(g, emb);
  if (t >= g.num_edge_types()) throw Error("reconstruct: unknown edge type");
  const EdgeType& et = g.edge_types()[t];
  AucReport report{et.label, emb.dim()};

  std::vector<double> pos;
  for (const auto& e : g.edges())
    if (e.type == t) pos.push_back(score_pair(emb, e.u, e.v));
  if (pos.empty()) throw Error("reconstruct: no edges of type '" + et.label + "'");

  const auto side_a = g.nodes_of_type(et.endpoint_types.first);
  const auto side_b = g.nodes_of_type(et.endpoint_types.second);
  const bool same_type = et.endpoint_types.first == et.endpoint_types.second;
  const double candidates = same_type ? 0.5 * static_cast<double>(side_a.size()) *
                                            static_cast<double>(side_a.size() - 1)
                                      : static_cast<double>(side_a.size()) *
                                            static_cast<double>(side_b.size());
  const double non_edges = candidates - static_cast<double>(pos.size());
  if (non_edges < 1.0)
    throw Error("reconstruct: edge type '" + et.label + "' has no non-edges to score against");

  std::vector<double> neg;
  if (non_edges <= static_cast<double>(max_neg)) {
    neg.reserve(static_cast<std::size_t>(non_edges));
    for (std::size_t i = 0; i < side_a.size(); ++i)
      for (std::size_t j = same_type ? i + 1 : 0; j < side_b.size(); ++j) {
        const NodeIndex x = side_a[i], y = side_b[j];
        if (!g.has_edge(x, y)) neg.push_back(score_pair(emb, x, y));
      }
  } else {
    report.negatives_sampled = true;
    neg.reserve(max_neg);
    while (neg.size() < max_neg) {
      auto e = detail::sample_non_edge(g, et, side_a, side_b, rng);
      if (!e) break;
      neg.push_back(score_pair(emb, e->u, e->v));
    }
  }
  report.n_pos = pos.size();
  report.n_neg = neg.size();
  report.auc = auc(pos, neg);
  return report;
}

/// Held-out edges and matched non-edges for link prediction.
struct LinkSplit {
  TypedGraph train_graph;
  std::vector<Edge> removed_edges;
  std::vector<Edge> sampled_non_edges;  // type field = the target edge type
  std::vector<TypeId> targets;
  std::vector<std::string> warnings;

  std::vector<Edge> removed_of(TypeId t) const {
    std::vector<Edge> out;
    for (const auto& e : removed_edges)
      if (e.type == t) out.push_back(e);
    return out;
  }
  std::vector<Edge> non_edges_of(TypeId t) const {
    std::vector<Edge> out;
    for (const auto& e : sampled_non_edges)
      if (e.type == t) out.push_back(e);
    return out;
  }
};

/// For each target type, visits its edges in random order and removes an
/// edge only when its endpoints stay connected without it, until
/// floor(fraction * |E_t|) are gone. Connectivity is over the whole graph,
/// so the component count never changes. Then draws as many type-compatible
/// non-edges of the original graph.
inline LinkSplit make_link_split(const TypedGraph& g, std::span<const TypeId> targets,
                                 double fraction, Engine& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw Error("fraction must be in [0, 1)");
  const auto& edges = g.edges();
  const std::size_t n = g.num_nodes();

  // Incidence lists so edges can be switched off.
  std::vector<std::size_t> inc_offsets(n + 1, 0);
  for (const auto& e : edges) {
    ++inc_offsets[e.u + 1];
    ++inc_offsets[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) inc_offsets[i + 1] += inc_offsets[i];
  std::vector<std::size_t> incident(inc_offsets[n]);
  {
    std::vector<std::size_t> fill(inc_offsets.begin(), inc_offsets.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      incident[fill[edges[i].u]++] = i;
      incident[fill[edges[i].v]++] = i;
    }
  }
  std::vector<char> alive(edges.size(), 1);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  std::vector<NodeIndex> frontier;

  auto still_connected = [&](NodeIndex from, NodeIndex to) {
    ++stamp;
    frontier.assign(1, from);
    mark[from] = stamp;
    while (!frontier.empty()) {
      const NodeIndex x = frontier.back();
      frontier.pop_back();
      for (std::size_t k = inc_offsets[x]; k < inc_offsets[x + 1]; ++k) {
        const std::size_t ei = incident[k];
        if (!alive[ei]) continue;
        const NodeIndex y = edges[ei].u == x ? edges[ei].v : edges[ei].u;
        if (mark[y] == stamp) continue;
        if (y == to) return true;
        mark[y] = stamp;
        frontier.push_back(y);
      }
    }
    return false;
  };

  LinkSplit split;
  split.targets.assign(targets.begin(), targets.end());
  for (TypeId t : targets) {
    if (t >= g.num_edge_types()) throw Error("make_link_split: unknown edge type");
    const EdgeType& et = g.edge_types()[t];
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].type == t) pool.push_back(i);
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[uniform_below(rng, i)]);
    const auto wanted = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(pool.size())));
    std::size_t removed = 0;
    for (std::size_t ei : pool) {
      if (removed == wanted) break;
      alive[ei] = 0;
      if (still_connected(edges[ei].u, edges[ei].v)) {
        split.removed_edges.push_back(edges[ei]);
        ++removed;
      } else {
        alive[ei] = 1;
      }
    }
    if (removed < wanted)
      split.warnings.push_back("edge type '" + et.label + "': removed " + std::to_string(removed) +
                               " of " + std::to_string(wanted) +
                               " requested edges; the rest are bridges");

    const auto side_a = g.nodes_of_type(et.endpoint_types.first);
    const auto side_b = g.nodes_of_type(et.endpoint_types.second);
    for (std::size_t i = 0; i < removed; ++i) {
      auto e = detail::sample_non_edge(g, et, side_a, side_b, rng);
      if (!e) {
        split.warnings.push_back("edge type '" + et.label + "': could not sample enough non-edges");
        break;
      }
      split.sampled_non_edges.push_back(*e);
    }
  }

  std::vector<Edge> kept;
  kept.reserve(edges.size() - split.removed_edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (alive[i]) kept.push_back(edges[i]);
  split.train_graph = g.with_edges(std::move(kept));
  return split;
}

inline LinkSplit make_link_split(const TypedGraph& g, TypeId t, double fraction, Engine& rng) {
  const TypeId targets[] = {t};
  return make_link_split(g, targets, fraction, rng);
}

/// AUC of held-out edges of type t against the matched non-edges.
inline AucReport link_prediction_eval(const LinkSplit& split, const EmbeddingTable& emb, TypeId t) {
  detail::check_embedding(split.train_graph, emb);
  const auto& et = split.train_graph.edge_types().at(t);
  std::vector<double> pos, neg;
  for (const auto& e : split.removed_edges)
    if (e.type == t) pos.push_back(score_pair(emb, e.u, e.v));
  for (const auto& e : split.sampled_non_edges)
    if (e.type == t) neg.push_back(score_pair(emb, e.u, e.v));
  if (pos.empty()) throw Error("link prediction: no held-out edges of type '" + et.label + "'");
  if (neg.empty()) throw Error("link prediction: no non-edges of type '" + et.label + "'");
  return {et.label, emb.dim(), auc(pos, neg), pos.size(), neg.size(), false};
}

/// Hyperbolic distance of x from the origin, measured in the Poincare ball.
inline double poincare_radius(std::span<const double> x) {
  const auto p = lorentz::to_poincare(x);
  const std::vector<double> zero(p.size(), 0.0);
  return lorentz::poincare_distance(zero, p);
}

struct Region {
  double upper = 0.0;  // infinity for the overflow bucket
  std::size_t count = 0;
  double mean_degree = 0.0;
};

struct RegionStats {
  std::vector<Region> regions;
  Region overflow{std::numeric_limits<double>::infinity()};
};

inline void to_json(nlohmann::json& j, const RegionStats& s) {
  j = nlohmann::json::object();
  auto& arr = j["regions"] = nlohmann::json::array();
  double lower = 0.0;
  for (const auto& r : s.regions) {
    arr.push_back({{"lower", lower}, {"upper", r.upper}, {"count", r.count}, {"mean_degree", r.mean_degree}});
    lower = r.upper;
  }
  j["overflow"] = {{"lower", lower}, {"count", s.overflow.count}, {"mean_degree", s.overflow.mean_degree}};
}

/// Buckets nodes of type t by distance from the origin: each node goes to the
/// first region whose upper boundary is >= its radius. Degree counts only
/// neighbors of `degree_type` when given.
inline RegionStats region_stats(const TypedGraph& g, const EmbeddingTable& emb, TypeId t,
                                std::span<const double> boundaries = std::vector<double>{2.0, 4.0, 6.0},
                                std::optional<TypeId> degree_type = std::nullopt) {
  detail::check_embedding(g, emb);
  if (!std::is_sorted(boundaries.begin(), boundaries.end()))
    throw Error("region boundaries must be ascending");
  RegionStats stats;
  for (double b : boundaries) stats.regions.push_back({b});
  std::vector<double> degree_sum(boundaries.size() + 1, 0.0);
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    if (g.type_of(v) != t) continue;
    const double r = poincare_radius(emb.point(v));
    const double deg = static_cast<double>(degree_type ? g.type_degree(v, *degree_type) : g.degree(v));
    const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), r);
    const auto idx = static_cast<std::size_t>(it - boundaries.begin());
    Region& bucket = idx < stats.regions.size() ? stats.regions[idx] : stats.overflow;
    ++bucket.count;
    degree_sum[idx] += deg;
  }
  for (std::size_t i = 0; i < stats.regions.size(); ++i)
    if (stats.regions[i].count) stats.regions[i].mean_degree = degree_sum[i] / static_cast<double>(stats.regions[i].count);
  if (stats.overflow.count)
    stats.overflow.mean_degree = degree_sum.back() / static_cast<double>(stats.overflow.count);
  return stats;
}

/// Writes `node_id<TAB>type<TAB>p_1<TAB>p_2<TAB>radius` for the Poincare disk
/// image of the two chosen spatial axes (lifted back onto H^2 first).
inline void export_projection(const TypedGraph& g, const EmbeddingTable& emb, const std::string& path,
                              std::size_t axis0 = 0, std::size_t axis1 = 1) {
  detail::check_embedding(g, emb);
  if (axis0 >= emb.dim() || axis1 >= emb.dim() || axis0 == axis1)
    throw Error("export_projection: invalid plane selection");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  std::string line;
  for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
    const auto x = emb.point(v);
    const double plane[2] = {x[axis0], x[axis1]};
    const auto lifted = lorentz::LorentzPoint::from_spatial(plane);
    const auto p = lorentz::to_poincare(lifted);
    const double zero[2] = {0.0, 0.0};
    line.clear();
    line += g.node_id(v);
    line += '\t';
    line += g.type_label(v);
    for (double c : {p[0], p[1], lorentz::poincare_distance(zero, p)}) {
      line += '\t';
      hyperwalk::detail::append_double(line, c);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace hyperwalk
