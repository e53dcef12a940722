// Minimal library walkthrough: embed a small two-block graph in the
// hyperboloid and score every edge type.

#include <iostream>

#include "hyperwalk/eval.hpp"
#include "hyperwalk/pipeline.hpp"
#include "hyperwalk/synthetic.hpp"

int main() {
  using namespace hyperwalk;
  const auto g = synthetic::block_graph({.nodes_per_type_per_block = 20});

  PipelineConfig cfg;
  cfg.train.dim = 5;
  cfg.walk.walks_per_node = 4;
  const auto result = embed_graph(g, cfg, [](const EpochStats& s) {
    std::cout << "epoch " << s.epoch << " loss " << s.mean_loss << '\n';
  });

  Engine rng = SeedSequence(cfg.train.seed).stream("reconstruct");
  for (TypeId t = 0; t < g.num_edge_types(); ++t) {
    const auto report = reconstruct(g, result.table, t, 100000, rng);
    std::cout << report.edge_type << " auc " << report.auc << '\n';
  }
}
