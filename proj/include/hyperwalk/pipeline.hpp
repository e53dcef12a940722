#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hyperwalk/corpus.hpp"
#include "hyperwalk/graph.hpp"
#include "hyperwalk/trainer.hpp"
#include "hyperwalk/walk.hpp"

namespace hyperwalk {

/// Walk, sampler and optimizer settings for one embedding run.
struct PipelineConfig {
  WalkConfig walk;
  SamplerConfig sampler;
  TrainConfig train;

  // Points every stage at the same run seed; stages draw from disjoint
  // named substreams of it.
  void set_seed(std::uint64_t seed) {
    walk.seed = seed;
    train.seed = seed;
  }

  void set_negatives(std::size_t k) {
    sampler.negatives_per_positive = k;
    train.negatives_per_positive = k;
  }

  void set_threads(std::size_t threads) {
    walk.threads = threads;
    train.threads = threads;
  }

  void validate() const {
    walk.validate();
    sampler.validate();
    train.validate();
    if (sampler.negatives_per_positive != train.negatives_per_positive)
      throw Error("sampler and trainer disagree on negatives per positive");
  }
};

inline void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = {{"walks_per_node", c.walk.walks_per_node},
       {"walk_length", c.walk.walk_length},
       {"window", c.sampler.window},
       {"negatives", c.train.negatives_per_positive},
       {"frequency_exponent", c.sampler.frequency_exponent},
       {"exclude_positive_pairs", c.train.exclude_positive_pairs},
       {"dim", c.train.dim},
       {"lr", c.train.lr},
       {"batch_size", c.train.batch_size},
       {"epochs", c.train.epochs},
       {"init_scale", c.train.init_scale},
       {"seed", c.train.seed},
       {"threads", c.train.threads}};
}

/// load -> walks -> corpus -> train, for a graph already in memory.
inline TrainResult embed_graph(const TypedGraph& g, const PipelineConfig& cfg,
                               const EpochCallback& on_epoch = {},
                               std::vector<Walk>* walks_out = nullptr) {
  cfg.validate();
  auto walks = generate_walks(g, cfg.walk);
  const auto corpus =
      build_corpus(g.num_nodes(), walks, cfg.sampler.window, cfg.sampler.frequency_exponent);
  if (walks_out) *walks_out = std::move(walks);
  return train(g, corpus, cfg.train, on_epoch);
}

}  // namespace hyperwalk
