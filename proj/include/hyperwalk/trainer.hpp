#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hyperwalk/corpus.hpp"
#include "hyperwalk/embedding.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/lorentz.hpp"
#include "hyperwalk/random.hpp"

namespace hyperwalk {

struct TrainConfig {
  std::size_t dim = 10;
  double lr = 0.3;
  std::size_t batch_size = 512;
  std::size_t epochs = 5;
  std::size_t negatives_per_positive = 20;
  double init_scale = 1e-3;
  std::uint64_t seed = 0;
  // When false, negatives are drawn from all nodes except the anchor.
  bool exclude_positive_pairs = true;
  // Gradient evaluation workers. Updates are reduced in a fixed order, so
  // the result does not depend on this value.
  std::size_t threads = 1;

  void validate() const {
    if (dim < 2) throw Error("dim must be at least 2");
    if (!(lr > 0.0)) throw Error("lr must be positive");
    if (batch_size < 1) throw Error("batch_size must be positive");
    if (negatives_per_positive < 1) throw Error("negatives_per_positive must be positive");
    if (!(init_scale > 0.0)) throw Error("init_scale must be positive");
    if (threads < 1) throw Error("threads must be positive");
  }
};

namespace detail {

// 2 d / sinh(d): the factor turning the distance's closed-form gradient
// into that of d^2. Its limit at d = 0 is 2.
inline double squared_distance_factor(double d) {
  return d < 1e-8 ? 2.0 : 2.0 * d / std::sinh(d);
}

struct SlotTerms {
  std::vector<double> sq_dist;
  std::vector<double> weights;  // softmax over {v} U negatives
};

// Loss of one positive pair against its candidates (slot 0 is the positive).
inline double softmax_terms(std::span<const double> eu,
                            std::span<const std::span<const double>> candidates,
                            SlotTerms& terms) {
  const std::size_t m = candidates.size();
  terms.sq_dist.resize(m);
  terms.weights.resize(m);
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double d = lorentz::distance(eu, candidates[j]);
    terms.sq_dist[j] = d * d;
    max_score = std::max(max_score, -terms.sq_dist[j]);
  }
  double z = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    terms.weights[j] = std::exp(-terms.sq_dist[j] - max_score);
    z += terms.weights[j];
  }
  for (double& w : terms.weights) w /= z;
  // -log softmax_0 = d0^2 + log sum exp(-d_j^2)
  return terms.sq_dist[0] + max_score + std::log(z);
}

// Euclidean partials of the pair loss. Slot 0 of cand_grads is e_v's.
// d loss / d(d_j^2) = [j == 0] - w_j and
// d(d^2(x, y)) / dx = -(2 d / sinh d) J y with J = diag(1, .., 1, -1).
inline void euclidean_partials(std::span<const double> eu,
                               std::span<const std::span<const double>> candidates,
                               const SlotTerms& terms, std::span<double> anchor_grad,
                               std::span<double> cand_grads) {
  const std::size_t amb = eu.size();
  const std::size_t n = amb - 1;
  std::fill(anchor_grad.begin(), anchor_grad.end(), 0.0);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double dloss = (j == 0 ? 1.0 : 0.0) - terms.weights[j];
    const double coeff = -dloss * squared_distance_factor(std::sqrt(terms.sq_dist[j]));
    const auto w = candidates[j];
    double* gw = cand_grads.data() + j * amb;
    for (std::size_t i = 0; i < n; ++i) {
      anchor_grad[i] += coeff * w[i];
      gw[i] = coeff * eu[i];
    }
    anchor_grad[n] -= coeff * w[n];
    gw[n] = -coeff * eu[n];
  }
}

}  // namespace detail

/// -log( exp(-d^2(u,v)) / sum_{v' in {v} U negs} exp(-d^2(u,v')) ).
inline double pair_loss(std::span<const double> eu, std::span<const double> ev,
                        std::span<const lorentz::Vector> negs) {
  std::vector<std::span<const double>> cands{ev};
  for (const auto& w : negs) cands.emplace_back(w);
  detail::SlotTerms terms;
  return std::max(0.0, detail::softmax_terms(eu, cands, terms));
}

struct PairGradients {
  double loss = 0.0;
  lorentz::Vector grad_u;
  lorentz::Vector grad_v;
  std::vector<lorentz::Vector> grad_negs;
  std::vector<double> weights;  // softmax weights, slot 0 is v
};

/// Riemannian gradients of pair_loss at each point, as tangent vectors.
inline PairGradients pair_gradients(std::span<const double> eu, std::span<const double> ev,
                                    std::span<const lorentz::Vector> negs) {
  std::vector<std::span<const double>> cands{ev};
  for (const auto& w : negs) cands.emplace_back(w);
  detail::SlotTerms terms;
  PairGradients out;
  out.loss = std::max(0.0, detail::softmax_terms(eu, cands, terms));
  const std::size_t amb = eu.size();
  lorentz::Vector anchor(amb);
  lorentz::Vector cand(amb * cands.size());
  detail::euclidean_partials(eu, cands, terms, anchor, cand);
  out.grad_u = lorentz::riemannian_gradient(eu, anchor);
  out.grad_v = lorentz::riemannian_gradient(ev, std::span<const double>(cand.data(), amb));
  for (std::size_t j = 1; j < cands.size(); ++j)
    out.grad_negs.push_back(
        lorentz::riemannian_gradient(cands[j], std::span<const double>(cand.data() + j * amb, amb)));
  out.weights = std::move(terms.weights);
  return out;
}

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double wall_time_s = 0.0;
  std::size_t short_negative_samples = 0;
  double max_manifold_drift = 0.0;  // |<x,x>+1| before renormalization
};

struct TrainResult {
  EmbeddingTable table;
  std::vector<EpochStats> epochs;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Riemannian SGD on the sampled softmax loss.
///
/// Each epoch visits the pairs in a freshly shuffled order in batches. For a
/// batch, negatives are drawn for every pair, Euclidean partials are summed
/// per node and divided by the batch size, and each touched node takes one
/// step x <- exp_x(-lr * grad) followed by renormalization.
inline TrainResult train(const TypedGraph& g, const SampleCorpus& corpus, const TrainConfig& cfg,
                         const EpochCallback& on_epoch = {}) {
  cfg.validate();
  if (corpus.empty()) throw Error("train: corpus has no positive pairs");
  if (corpus.num_nodes() != g.num_nodes()) throw Error("train: corpus does not match graph");

  const SeedSequence seeds(cfg.seed);
  Engine init_rng = seeds.stream("init");
  TrainResult result{init_embeddings(g, cfg.dim, cfg.init_scale, init_rng), {}};
  EmbeddingTable& table = result.table;

  const auto& pairs = corpus.pairs();
  const std::size_t amb = cfg.dim + 1;
  const std::size_t k = cfg.negatives_per_positive;
  const std::size_t slots = k + 2;  // anchor, positive, negatives

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);

  // Per-batch scratch: node ids and Euclidean partials for each pair's slots.
  std::vector<NodeIndex> slot_nodes(cfg.batch_size * slots);
  std::vector<std::size_t> slot_count(cfg.batch_size);
  std::vector<double> slot_grads(cfg.batch_size * slots * amb);
  std::vector<double> pair_loss_buf(cfg.batch_size);

  std::vector<double> accum(g.num_nodes() * amb, 0.0);
  std::vector<char> touched_flag(g.num_nodes(), 0);
  std::vector<NodeIndex> touched;
  lorentz::Vector step(amb);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochStats stats{epoch + 1};
    Engine shuffle_rng = seeds.stream("shuffle", epoch);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_below(shuffle_rng, i)]);

    double loss_sum = 0.0;
    const std::size_t num_batches = (pairs.size() + cfg.batch_size - 1) / cfg.batch_size;
    for (std::size_t batch = 0; batch < num_batches; ++batch) {
      const std::size_t first = batch * cfg.batch_size;
      const std::size_t count = std::min(cfg.batch_size, pairs.size() - first);

      Engine neg_rng = seeds.stream("negatives", epoch, batch);
      NegativeSample negs;
      for (std::size_t p = 0; p < count; ++p) {
        const NodePair& pr = pairs[order[first + p]];
        sample_negatives(corpus, pr.anchor, k, neg_rng, negs, cfg.exclude_positive_pairs);
        stats.short_negative_samples += negs.short_sample;
        NodeIndex* ids = slot_nodes.data() + p * slots;
        ids[0] = pr.anchor;
        ids[1] = pr.context;
        std::copy(negs.nodes.begin(), negs.nodes.end(), ids + 2);
        slot_count[p] = 2 + negs.nodes.size();
      }

      auto evaluate = [&](std::size_t lo, std::size_t hi) {
        detail::SlotTerms terms;
        std::vector<std::span<const double>> cands;
        for (std::size_t p = lo; p < hi; ++p) {
          const NodeIndex* ids = slot_nodes.data() + p * slots;
          cands.clear();
          for (std::size_t s = 1; s < slot_count[p]; ++s) cands.push_back(table.point(ids[s]));
          const auto eu = table.point(ids[0]);
          pair_loss_buf[p] = detail::softmax_terms(eu, cands, terms);
          double* grads = slot_grads.data() + p * slots * amb;
          detail::euclidean_partials(eu, cands, terms, std::span<double>(grads, amb),
                                     std::span<double>(grads + amb, cands.size() * amb));
        }
      };
      const std::size_t workers = std::min(cfg.threads, count);
      if (workers <= 1) {
        evaluate(0, count);
      } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
          const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
          if (lo < hi) pool.emplace_back(evaluate, lo, hi);
        }
      }

      touched.clear();
      for (std::size_t p = 0; p < count; ++p) {
        loss_sum += pair_loss_buf[p];
        const NodeIndex* ids = slot_nodes.data() + p * slots;
        const double* grads = slot_grads.data() + p * slots * amb;
        for (std::size_t s = 0; s < slot_count[p]; ++s) {
          const NodeIndex v = ids[s];
          if (!touched_flag[v]) {
            touched_flag[v] = 1;
            touched.push_back(v);
          }
          double* acc = accum.data() + static_cast<std::size_t>(v) * amb;
          for (std::size_t i = 0; i < amb; ++i) acc[i] += grads[s * amb + i];
        }
      }

      const double scale = -cfg.lr / static_cast<double>(count);
      for (NodeIndex v : touched) {
        double* acc = accum.data() + static_cast<std::size_t>(v) * amb;
        auto x = table.point(v);
        lorentz::riemannian_gradient(x, std::span<const double>(acc, amb), step);
        bool finite = true;
        for (double& c : step) {
          c *= scale;
          finite = finite && std::isfinite(c);
        }
        const auto where = [&] {
          return " in epoch " + std::to_string(epoch + 1) + ", batch " + std::to_string(batch) +
                 " (node '" + g.node_id(v) + "')";
        };
        if (!finite) throw Error("non-finite gradient step" + where());
        try {
          lorentz::exp_map(x, step, x);
        } catch (const Error& e) {
          throw Error(e.what() + where());
        }
        for (double c : x) finite = finite && std::isfinite(c);
        if (!finite) throw Error("non-finite embedding after update" + where());
        stats.max_manifold_drift =
            std::max(stats.max_manifold_drift, std::abs(lorentz::minkowski_inner(x, x) + 1.0));
        lorentz::renormalize(x);
        std::fill(acc, acc + amb, 0.0);
        touched_flag[v] = 0;
      }
      if (!std::isfinite(loss_sum))
        throw Error("non-finite loss in epoch " + std::to_string(epoch + 1) + ", batch " +
                    std::to_string(batch));
    }
    stats.mean_loss = loss_sum / static_cast<double>(pairs.size());
    stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

}  // namespace hyperwalk
