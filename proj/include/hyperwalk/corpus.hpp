#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <json.hpp>

#include "hyperwalk/error.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/random.hpp"
#include "hyperwalk/walk.hpp"

namespace hyperwalk {

struct NodePair {
  NodeIndex anchor;
  NodeIndex context;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct SamplerConfig {
  std::size_t window = 5;
  std::size_t negatives_per_positive = 20;
  // Negative-sampling weight is node_freq^exponent.
  double frequency_exponent = 1.0;

  void validate() const {
    if (window < 1) throw Error("window must be at least 1");
    if (negatives_per_positive < 1) throw Error("negatives_per_positive must be at least 1");
    if (!(frequency_exponent >= 0.0)) throw Error("frequency_exponent must be non-negative");
  }
};

/// Walker/Vose alias table: O(1) draws from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (n == 0 || !(total > 0.0)) throw Error("alias table needs a positive total weight");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;  // round-off leftovers
  }

  std::size_t size() const noexcept { return prob_.size(); }

  std::uint32_t sample(Engine& rng) const {
    const auto column = static_cast<std::uint32_t>(uniform_below(rng, prob_.size()));
    return uniform01(rng) < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Multiset of positive (anchor, context) pairs collected from walks.
class SampleCorpus {
 public:
  SampleCorpus() = default;

  SampleCorpus(std::size_t num_nodes, std::vector<NodePair> pairs, double frequency_exponent = 1.0)
      : pairs_(std::move(pairs)), node_freq_(num_nodes, 0) {
    for (const auto& p : pairs_) {
      if (p.anchor >= num_nodes || p.context >= num_nodes) throw Error("pair endpoint out of range");
      ++node_freq_[p.anchor];
      ++node_freq_[p.context];
    }
    build_positive_index(num_nodes);
    if (!pairs_.empty()) {
      weights_.resize(num_nodes);
      for (std::size_t i = 0; i < num_nodes; ++i)
        weights_[i] = node_freq_[i] == 0 ? 0.0
                                         : std::pow(static_cast<double>(node_freq_[i]),
                                                    frequency_exponent);
      sampler_ = AliasTable(weights_);
      build_restricted_tables();
    }
  }

  std::size_t num_nodes() const noexcept { return node_freq_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const std::vector<NodePair>& pairs() const noexcept { return pairs_; }
  const std::vector<std::size_t>& node_freq() const noexcept { return node_freq_; }

  /// Distinct w with (u, w) in the multiset, ascending.
  std::span<const NodeIndex> positives_of(NodeIndex u) const noexcept {
    return {positive_.data() + positive_offsets_[u], positive_.data() + positive_offsets_[u + 1]};
  }

  bool is_positive(NodeIndex u, NodeIndex w) const noexcept {
    auto run = positives_of(u);
    return std::binary_search(run.begin(), run.end(), w);
  }

  const AliasTable& sampler() const noexcept { return sampler_; }

  /// Cumulative weights over the non-positive nodes of u, or empty when u
  /// uses rejection against the global table instead.
  std::span<const double> restricted_cumulative(NodeIndex u) const noexcept {
    return {restricted_cum_.data() + restricted_offsets_[u],
            restricted_cum_.data() + restricted_offsets_[u + 1]};
  }
  std::span<const NodeIndex> restricted_nodes(NodeIndex u) const noexcept {
    return {restricted_nodes_.data() + restricted_offsets_[u],
            restricted_nodes_.data() + restricted_offsets_[u + 1]};
  }
  bool uses_restricted_table(NodeIndex u) const noexcept { return restricted_[u] != 0; }

 private:
  // Anchors whose positives (plus themselves) hold at least half of the
  // sampling mass would reject most global draws. They get an exact table
  // of the conditional distribution instead; the law of the draws is the
  // same as rejection sampling.
  void build_restricted_tables() {
    const std::size_t n = node_freq_.size();
    double total = 0.0;
    for (double w : weights_) total += w;
    restricted_.assign(n, 0);
    restricted_offsets_.assign(n + 1, 0);
    std::vector<char> is_pos(n, 0);
    for (NodeIndex u = 0; u < n; ++u) {
      restricted_offsets_[u + 1] = restricted_offsets_[u];
      double excluded = weights_[u];
      for (NodeIndex w : positives_of(u)) excluded += w == u ? 0.0 : weights_[w];
      if (total - excluded >= 0.5 * total) continue;
      restricted_[u] = 1;
      for (NodeIndex w : positives_of(u)) is_pos[w] = 1;
      double cum = 0.0;
      for (NodeIndex w = 0; w < n; ++w) {
        if (w == u || is_pos[w] || weights_[w] == 0.0) continue;
        cum += weights_[w];
        restricted_nodes_.push_back(w);
        restricted_cum_.push_back(cum);
        ++restricted_offsets_[u + 1];
      }
      for (NodeIndex w : positives_of(u)) is_pos[w] = 0;
    }
  }

  void build_positive_index(std::size_t n) {
    std::vector<NodePair> sorted = pairs_;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    positive_offsets_.assign(n + 1, 0);
    for (const auto& p : sorted) ++positive_offsets_[p.anchor + 1];
    for (std::size_t i = 0; i < n; ++i) positive_offsets_[i + 1] += positive_offsets_[i];
    positive_.resize(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) positive_[i] = sorted[i].context;
  }

  std::vector<NodePair> pairs_;
  std::vector<std::size_t> node_freq_;
  std::vector<std::size_t> positive_offsets_;
  std::vector<NodeIndex> positive_;
  std::vector<double> weights_;
  AliasTable sampler_;
  std::vector<char> restricted_;
  std::vector<std::size_t> restricted_offsets_;
  std::vector<NodeIndex> restricted_nodes_;
  std::vector<double> restricted_cum_;
};

/// Every ordered pair (w_i, w_j), j != i, |i - j| <= window, in walk order.
/// Self-pairs from revisits are dropped.
inline SampleCorpus build_corpus(std::size_t num_nodes, std::span<const Walk> walks,
                                 std::size_t window, double frequency_exponent = 1.0) {
  if (window < 1) throw Error("window must be at least 1");
  std::vector<NodePair> pairs;
  std::size_t expected = 0;
  for (const auto& w : walks)
    expected += w.size() * std::min(2 * window, w.size() > 0 ? w.size() - 1 : 0);
  pairs.reserve(expected);
  for (const auto& walk : walks) {
    const std::size_t len = walk.size();
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(len - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i || walk[j] == walk[i]) continue;
        pairs.push_back({walk[i], walk[j]});
      }
    }
  }
  return SampleCorpus(num_nodes, std::move(pairs), frequency_exponent);
}

struct NegativeSample {
  std::vector<NodeIndex> nodes;
  bool short_sample = false;
};

/// k i.i.d. draws with P(w) proportional to node_freq(w)^exponent,
/// restricted to w != u with (u, w) not in the corpus. Rejection against the
/// global table gives up after 100*k consecutive rejections and returns what
/// it has, flagged short; anchors with an exact restricted table are short
/// only when no admissible node exists.
inline void sample_negatives(const SampleCorpus& corpus, NodeIndex u, std::size_t k, Engine& rng,
                             NegativeSample& out, bool exclude_positive_pairs = true) {
  out.nodes.clear();
  out.short_sample = false;
  if (k == 0) return;
  if (corpus.empty()) throw Error("sample_negatives: empty corpus");
  if (exclude_positive_pairs && corpus.uses_restricted_table(u)) {
    const auto cum = corpus.restricted_cumulative(u);
    const auto nodes = corpus.restricted_nodes(u);
    if (cum.empty()) {
      out.short_sample = true;
      return;
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double r = uniform01(rng) * cum.back();
      const auto it = std::upper_bound(cum.begin(), cum.end(), r);
      out.nodes.push_back(nodes[std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                                      nodes.size() - 1)]);
    }
    return;
  }
  const auto positives = corpus.positives_of(u);
  const std::size_t max_rejections = 100 * k;
  std::size_t rejections = 0;
  while (out.nodes.size() < k) {
    const NodeIndex w = corpus.sampler().sample(rng);
    if (w == u ||
        (exclude_positive_pairs && std::binary_search(positives.begin(), positives.end(), w))) {
      if (++rejections >= max_rejections) {
        out.short_sample = true;
        return;
      }
      continue;
    }
    rejections = 0;
    out.nodes.push_back(w);
  }
}

inline NegativeSample sample_negatives(const SampleCorpus& corpus, NodeIndex u, std::size_t k,
                                       Engine& rng, bool exclude_positive_pairs = true) {
  NegativeSample out;
  sample_negatives(corpus, u, k, rng, out, exclude_positive_pairs);
  return out;
}

/// Pair count and the most frequent nodes, for inspection.
inline nlohmann::json corpus_stats(const TypedGraph& g, const SampleCorpus& corpus,
                                   std::size_t top = 10) {
  std::vector<NodeIndex> order(corpus.num_nodes());
  std::iota(order.begin(), order.end(), 0);
  const auto& freq = corpus.node_freq();
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return freq[a] > freq[b]; });
  nlohmann::json top_nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min(top, order.size()); ++i)
    top_nodes.push_back({{"node_id", g.node_id(order[i])},
                         {"type", g.type_label(order[i])},
                         {"frequency", freq[order[i]]}});
  std::size_t distinct = 0;
  for (NodeIndex v = 0; v < corpus.num_nodes(); ++v) distinct += corpus.positives_of(v).size();
  return {{"pair_count", corpus.pairs().size()},
          {"distinct_pairs", distinct},
          {"top_nodes", top_nodes}};
}

}  // namespace hyperwalk
