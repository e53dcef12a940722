#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hyperwalk/error.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

using Walk = std::vector<NodeIndex>;

/// A walk in progress together with how often each node type occurs in it.
class WalkState {
 public:
  explicit WalkState(std::size_t num_types) : type_counts_(num_types, 0) {}

  WalkState(const TypedGraph& g, std::span<const NodeIndex> prefix)
      : type_counts_(g.num_node_types(), 0) {
    for (NodeIndex v : prefix) push(g, v);
  }

  void push(const TypedGraph& g, NodeIndex v) {
    sequence_.push_back(v);
    ++type_counts_[g.type_of(v)];
  }

  void clear() {
    sequence_.clear();
    std::fill(type_counts_.begin(), type_counts_.end(), 0);
  }

  bool empty() const noexcept { return sequence_.empty(); }
  NodeIndex last() const noexcept { return sequence_.back(); }
  const Walk& sequence() const noexcept { return sequence_; }
  const std::vector<std::size_t>& type_counts() const noexcept { return type_counts_; }

  // Overrides the counters without touching the sequence. Used to probe
  // the transition rule from arbitrary counter states.
  void set_type_counts(std::vector<std::size_t> counts) { type_counts_ = std::move(counts); }

  Walk take() && { return std::move(sequence_); }

 private:
  Walk sequence_;
  std::vector<std::size_t> type_counts_;
};

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const {
    if (walk_length < 2) throw Error("walk_length must be at least 2");
    if (walks_per_node < 1) throw Error("walks_per_node must be at least 1");
    if (threads < 1) throw Error("threads must be at least 1");
  }
};

struct Transition {
  NodeIndex node;
  double probability;
};

namespace detail {

// Unnormalized weight of choosing type t next: exp(-(N_t - min N)) over the
// types present around the current node. Shifting by the minimum keeps the
// largest weight at exactly 1.
inline void type_weights(const TypedGraph& g, NodeIndex current,
                         const std::vector<std::size_t>& counts, std::vector<double>& out) {
  const std::size_t num_types = g.num_node_types();
  out.assign(num_types, 0.0);
  std::size_t min_count = std::numeric_limits<std::size_t>::max();
  for (TypeId t = 0; t < num_types; ++t)
    if (g.type_degree(current, t) > 0) min_count = std::min(min_count, counts[t]);
  for (TypeId t = 0; t < num_types; ++t)
    if (g.type_degree(current, t) > 0)
      out[t] = std::exp(-static_cast<double>(counts[t] - min_count));
}

}  // namespace detail

/// Next-step distribution from the last node of `state`. Each neighbor w of
/// type t gets probability proportional to exp(-N_t) / (neighbors of type t).
/// An empty result means the current node is a dead end.
inline std::vector<Transition> transition_distribution(const TypedGraph& g,
                                                       const WalkState& state) {
  if (state.empty()) throw Error("transition_distribution: empty walk state");
  const NodeIndex current = state.last();
  std::vector<double> weights;
  detail::type_weights(g, current, state.type_counts(), weights);
  double total = 0.0;
  for (double w : weights) total += w;

  std::vector<Transition> out;
  out.reserve(g.degree(current));
  for (TypeId t = 0; t < g.num_node_types(); ++t) {
    const auto run = g.neighbors_by_type(current, t);
    if (run.empty()) continue;
    const double p = weights[t] / total / static_cast<double>(run.size());
    for (NodeIndex w : run) out.push_back({w, p});
  }
  return out;
}

/// Draws the next node from the last node of `state`: a neighbor type with
/// probability proportional to exp(-N_t), then a uniform neighbor of that
/// type. Returns nullopt at a dead end. `weights` is scratch space.
inline std::optional<NodeIndex> next_node(const TypedGraph& g, const WalkState& state, Engine& rng,
                                          std::vector<double>& weights) {
  const NodeIndex current = state.last();
  if (g.degree(current) == 0) return std::nullopt;
  detail::type_weights(g, current, state.type_counts(), weights);
  double total = 0.0;
  for (double w : weights) total += w;
  double r = uniform01(rng) * total;
  TypeId chosen = 0;
  bool picked = false;
  for (TypeId t = 0; t < weights.size(); ++t) {
    if (weights[t] == 0.0) continue;
    chosen = t;
    picked = true;
    if (r < weights[t]) break;
    r -= weights[t];
  }
  if (!picked) return std::nullopt;
  const auto run = g.neighbors_by_type(current, chosen);
  return run[uniform_below(rng, run.size())];
}

inline std::optional<NodeIndex> next_node(const TypedGraph& g, const WalkState& state, Engine& rng) {
  if (state.empty()) throw Error("next_node: empty walk state");
  std::vector<double> weights;
  return next_node(g, state, rng, weights);
}

/// Self-guided walk from `start`. Stops early at a dead end.
inline Walk self_guided_walk(const TypedGraph& g, NodeIndex start, std::size_t length,
                             Engine& rng) {
  WalkState state(g.num_node_types());
  if (length == 0) return {};
  state.push(g, start);
  std::vector<double> weights;
  while (state.sequence().size() < length) {
    const auto next = next_node(g, state, rng, weights);
    if (!next) break;
    state.push(g, *next);
  }
  return std::move(state).take();
}

/// Plain uniform random walk; the unbiased reference for type-balance checks.
inline Walk uniform_walk(const TypedGraph& g, NodeIndex start, std::size_t length, Engine& rng) {
  Walk walk;
  if (length == 0) return walk;
  walk.reserve(length);
  walk.push_back(start);
  while (walk.size() < length) {
    const auto nbrs = g.neighbors(walk.back());
    if (nbrs.empty()) break;
    walk.push_back(nbrs[uniform_below(rng, nbrs.size())]);
  }
  return walk;
}

/// walks_per_node walks from every node, ordered by (repetition, node).
/// Walk (node, rep) draws from its own substream, so output is identical for
/// any thread count.
inline std::vector<Walk> generate_walks(const TypedGraph& g, const WalkConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.num_nodes();
  std::vector<Walk> walks(n * cfg.walks_per_node);
  const SeedSequence seeds(cfg.seed);
  auto run_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      const std::size_t rep = i / n;
      const auto node = static_cast<NodeIndex>(i % n);
      Engine rng = seeds.stream("walk", node, rep);
      walks[i] = self_guided_walk(g, node, cfg.walk_length, rng);
    }
  };
  const std::size_t threads = std::min(cfg.threads, std::max<std::size_t>(walks.size(), 1));
  if (threads <= 1) {
    run_range(0, walks.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (walks.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t first = t * chunk;
      const std::size_t last = std::min(walks.size(), first + chunk);
      if (first < last) pool.emplace_back(run_range, first, last);
    }
  }
  return walks;
}

/// One walk per line, space-separated node ids.
inline void write_walks(const TypedGraph& g, std::span<const Walk> walks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (const auto& walk : walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << g.node_id(walk[i]);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace hyperwalk
