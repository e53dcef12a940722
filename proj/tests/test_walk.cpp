#include <cmath>
#include <map>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "hyperwalk/synthetic.hpp"
#include "hyperwalk/walk.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace hyperwalk;

namespace {

std::map<NodeIndex, double> as_map(const std::vector<Transition>& dist) {
  std::map<NodeIndex, double> out;
  for (const auto& t : dist) out[t.node] += t.probability;
  return out;
}

// Star around node 0 plus optional extra edges among the leaves.
TypedGraph star(const std::vector<std::string>& leaf_types) {
  GraphBuilder b;
  b.add_node("c", "C");
  for (std::size_t i = 0; i < leaf_types.size(); ++i) {
    b.add_node("l" + std::to_string(i), leaf_types[i]);
    b.add_edge(NodeIndex{0}, static_cast<NodeIndex>(i + 1));
  }
  return std::move(b).build();
}

}  // namespace

TEST(Walk, SingleNeighborIsCertain) {
  auto g = star({"A"});
  WalkState s(g, std::vector<NodeIndex>{0});
  auto dist = transition_distribution(g, s);
  ASSERT_EQ(dist.size(), 1u);
  EXPECT_EQ(dist[0].node, 1u);
  EXPECT_EQ(dist[0].probability, 1.0);
}

TEST(Walk, HandEvaluatedExample) {
  GraphBuilder b;
  const auto c = b.add_node("c", "C");
  const auto a1 = b.add_node("a1", "A");
  const auto a2 = b.add_node("a2", "A");
  const auto b1 = b.add_node("b1", "B");
  b.add_edge(c, a1);
  b.add_edge(c, a2);
  b.add_edge(c, b1);
  auto g = std::move(b).build();
  WalkState s(g, std::vector<NodeIndex>{c});
  std::vector<std::size_t> counts(g.num_node_types(), 0);
  counts[*g.find_node_type("A")] = 2;
  counts[*g.find_node_type("B")] = 1;
  counts[*g.find_node_type("C")] = 1;
  s.set_type_counts(counts);

  auto got = as_map(transition_distribution(g, s));
  auto want = oracle::transition(g, c, counts);
  // Independent arithmetic: a two-type softmax over -N.
  const double pb = std::exp(-1.0) / (std::exp(-2.0) + std::exp(-1.0));
  EXPECT_NEAR(want[b1], pb, 1e-15);
  EXPECT_NEAR(got[b1], pb, 1e-12);
  EXPECT_NEAR(got[a1], (1.0 - pb) / 2.0, 1e-12);
  EXPECT_NEAR(got[a2], (1.0 - pb) / 2.0, 1e-12);
  EXPECT_NEAR(got[b1], 0.7311, 1e-4);
  EXPECT_NEAR(got[a1], 0.1345, 1e-4);
}

TEST(Walk, EqualCountsGiveUniform) {
  auto g = star({"A", "A", "B", "B", "D", "D"});
  WalkState s(g, std::vector<NodeIndex>{0});
  for (const auto& t : transition_distribution(g, s)) EXPECT_NEAR(t.probability, 1.0 / 6.0, 1e-15);
}

TEST(Walk, MatchesPerNeighborOracleOnRandomGraphs) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    GraphBuilder b;
    const std::size_t n = 8;
    for (std::size_t i = 0; i < n; ++i)
      b.add_node("v" + std::to_string(i), std::string(1, static_cast<char>('A' + rng() % 3)));
    for (NodeIndex i = 0; i < n; ++i)
      for (NodeIndex j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) b.add_edge(i, j);
    auto g = std::move(b).build();
    for (NodeIndex v = 0; v < n; ++v) {
      if (g.degree(v) == 0) continue;
      WalkState s(g, std::vector<NodeIndex>{v});
      std::vector<std::size_t> counts(g.num_node_types());
      for (auto& c : counts) c = rng() % 6;
      s.set_type_counts(counts);
      auto got = transition_distribution(g, s);
      auto want = oracle::transition(g, v, counts);
      double total = 0.0;
      for (const auto& t : got) {
        EXPECT_NEAR(t.probability, want.at(t.node), 1e-12);
        total += t.probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_EQ(got.size(), want.size());
    }
  }
}

TEST(Walk, RareTypeIsPreferred) {
  auto g = star({"A", "A", "B", "B"});
  WalkState s(g, std::vector<NodeIndex>{0});
  std::vector<std::size_t> counts(g.num_node_types(), 0);
  counts[*g.find_node_type("A")] = 3;
  counts[*g.find_node_type("B")] = 1;
  s.set_type_counts(counts);
  const auto A = *g.find_node_type("A");
  double max_a = 0.0, min_b = 1.0;
  for (const auto& t : transition_distribution(g, s)) {
    if (g.type_of(t.node) == A)
      max_a = std::max(max_a, t.probability);
    else
      min_b = std::min(min_b, t.probability);
  }
  EXPECT_GT(min_b, max_a);
}

TEST(Walk, DeadEndAndEmptyState) {
  GraphBuilder b;
  b.add_node("x", "A");
  b.add_node("y", "B");
  auto g = std::move(b).build();
  WalkState s(g, std::vector<NodeIndex>{0});
  EXPECT_TRUE(transition_distribution(g, s).empty());
  EXPECT_THROW(transition_distribution(g, WalkState(g.num_node_types())), Error);
  Engine rng(1);
  EXPECT_EQ(self_guided_walk(g, 0, 80, rng), (Walk{0}));
}

TEST(Walk, PathOfTwoAlternates) {
  GraphBuilder b;
  b.add_node("a", "A");
  b.add_node("b", "B");
  b.add_edge("a", "b");
  auto g = std::move(b).build();
  Engine rng(3);
  EXPECT_EQ(self_guided_walk(g, 0, 4, rng), (Walk{0, 1, 0, 1}));
}

TEST(Walk, StepsFollowEdgesAndCountsMatchRecount) {
  auto g = synthetic::skewed_type_graph({});
  Engine rng(5);
  for (NodeIndex start = 0; start < 20; ++start) {
    auto walk = self_guided_walk(g, start, 80, rng);
    ASSERT_EQ(walk.size(), 80u);
    EXPECT_EQ(walk.front(), start);
    for (std::size_t i = 1; i < walk.size(); ++i) EXPECT_TRUE(g.has_edge(walk[i - 1], walk[i]));
    WalkState s(g, walk);
    std::size_t sum = 0;
    for (TypeId t = 0; t < g.num_node_types(); ++t) {
      const auto recount = static_cast<std::size_t>(
          std::count_if(walk.begin(), walk.end(), [&](NodeIndex v) { return g.type_of(v) == t; }));
      EXPECT_EQ(s.type_counts()[t], recount);
      sum += s.type_counts()[t];
    }
    EXPECT_EQ(sum, walk.size());
  }
}

TEST(Walk, CompleteBipartiteBalance) {
  GraphBuilder b;
  for (int i = 0; i < 3; ++i) b.add_node("a" + std::to_string(i), "A");
  for (int i = 0; i < 3; ++i) b.add_node("b" + std::to_string(i), "B");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b.add_edge("a" + std::to_string(i), "b" + std::to_string(j));
  auto g = std::move(b).build();
  const auto A = *g.find_node_type("A");
  Engine rng(8);
  std::size_t count_a = 0, total = 0;
  for (int w = 0; w < 100; ++w) {
    auto walk = self_guided_walk(g, static_cast<NodeIndex>(w % 6), 10000, rng);
    for (NodeIndex v : walk) count_a += g.type_of(v) == A;
    total += walk.size();
  }
  const double diff = std::abs(2.0 * static_cast<double>(count_a) - static_cast<double>(total));
  EXPECT_LT(diff / static_cast<double>(total), 0.02);
}

TEST(Walk, EmpiricalFrequenciesMatchDistribution) {
  // Walks a0 -> c -> ?: at the centre the counters are {A:1, C:1}, so the
  // A leaves are down-weighted against B and D.
  auto g = star({"A", "A", "A", "B", "D"});
  const NodeIndex a0 = 1;
  const auto dist = as_map(transition_distribution(g, WalkState(g, std::vector<NodeIndex>{a0, 0})));
  const int draws = 100000;
  std::map<NodeIndex, int> hits;
  Engine rng(21);
  for (int i = 0; i < draws; ++i) ++hits[self_guided_walk(g, a0, 3, rng)[2]];
  double total = 0.0;
  for (auto [node, p] : dist) {
    const double se = std::sqrt(p * (1.0 - p) / draws);
    EXPECT_LT(std::abs(hits[node] / static_cast<double>(draws) - p), 3.0 * se) << node;
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(dist.at(4), dist.at(1));
}

TEST(Walk, NextNodeFollowsOverriddenCounters) {
  auto g = star({"A", "B", "B", "D"});
  WalkState s(g, std::vector<NodeIndex>{0});
  std::vector<std::size_t> counts(g.num_node_types(), 0);
  counts[*g.find_node_type("A")] = 4;
  counts[*g.find_node_type("B")] = 1;
  s.set_type_counts(counts);
  const auto want = oracle::transition(g, 0, counts);
  const int draws = 100000;
  std::map<NodeIndex, int> hits;
  Engine rng(4);
  for (int i = 0; i < draws; ++i) ++hits[*next_node(g, s, rng)];
  for (auto [node, p] : want) {
    const double se = std::sqrt(p * (1.0 - p) / draws);
    EXPECT_LT(std::abs(hits[node] / static_cast<double>(draws) - p), 3.0 * se) << node;
  }
  GraphBuilder b;
  b.add_node("x", "A");
  auto isolated = std::move(b).build();
  WalkState lonely(isolated, std::vector<NodeIndex>{0});
  EXPECT_FALSE(next_node(isolated, lonely, rng).has_value());
  EXPECT_THROW(next_node(g, WalkState(g.num_node_types()), rng), Error);
}

TEST(Walk, GenerateWalksShapeAndDeterminism) {
  GraphBuilder b;
  b.add_node("a", "A");
  b.add_node("b", "B");
  b.add_edge("a", "b");
  auto tiny = std::move(b).build();
  EXPECT_EQ(generate_walks(tiny, {.walks_per_node = 1}).size(), 2u);

  auto g = synthetic::skewed_type_graph({});
  WalkConfig cfg{.walks_per_node = 2, .walk_length = 20, .seed = 0};
  const auto first = generate_walks(g, cfg);
  EXPECT_EQ(first, generate_walks(g, cfg));
  EXPECT_EQ(first.size(), 2 * g.num_nodes());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].front(), i % g.num_nodes());
  cfg.threads = 3;
  EXPECT_EQ(first, generate_walks(g, cfg));
  cfg.threads = 1;
  cfg.seed = 1;
  EXPECT_NE(first, generate_walks(g, cfg));
}

TEST(Walk, ConfigValidation) {
  EXPECT_THROW((WalkConfig{.walk_length = 1}.validate()), Error);
  EXPECT_THROW((WalkConfig{.walks_per_node = 0}.validate()), Error);
  EXPECT_NO_THROW(WalkConfig{}.validate());
  EXPECT_EQ(WalkConfig{}.walks_per_node, 10u);
  EXPECT_EQ(WalkConfig{}.walk_length, 80u);
}

TEST(Walk, WriteWalksUsesNodeIds) {
  testing_support::TempDir dir;
  GraphBuilder b;
  b.add_node("x1", "A");
  b.add_node("y1", "B");
  b.add_edge("x1", "y1");
  auto g = std::move(b).build();
  const std::vector<Walk> walks{{0, 1, 0}, {1}};
  write_walks(g, walks, dir.file("w.txt"));
  EXPECT_EQ(testing_support::read_file(dir.file("w.txt")), "x1 y1 x1\ny1\n");
}
