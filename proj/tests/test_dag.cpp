#include <gtest/gtest.h>

#include "dagrta/dag.hpp"
#include "fixtures.hpp"

using namespace dagrta;

TEST(Validate, SingleVertexIsValid) {
  const std::vector<Time> w{5};
  EXPECT_TRUE(validate(w, {}).ok());
}

TEST(Validate, TwoCycleRejected) {
  const std::vector<Time> w{1, 1};
  const std::vector<Edge> e{{0, 1}, {1, 0}};
  EXPECT_EQ(validate(w, e).kind, DagErrorKind::Cycle);
  EXPECT_THROW(Dag(w, e), DagError);
}

TEST(Validate, DanglingEdgeRejected) {
  const std::vector<Time> w{1, 1};
  const std::vector<Edge> e{{0, 2}};
  EXPECT_EQ(validate(w, e).kind, DagErrorKind::DanglingEdge);
}

TEST(Validate, SelfLoopRejected) {
  const std::vector<Time> w{1};
  const std::vector<Edge> e{{0, 0}};
  EXPECT_EQ(validate(w, e).kind, DagErrorKind::SelfLoop);
}

TEST(Normalize, TwoSourcesGetDummySource) {
  const Dag g({1, 2, 3}, {{0, 2}, {1, 2}});
  const auto n = normalize_source_sink(g);
  EXPECT_TRUE(n.added_source);
  EXPECT_FALSE(n.added_sink);
  EXPECT_EQ(n.dag.size(), 4u);
  EXPECT_EQ(n.source, 3);
  EXPECT_EQ(n.dag.wcet(3), 0);
}

TEST(Normalize, ChainUnchanged) {
  const Dag g = fixtures::chain({1, 2});
  const auto n = normalize_source_sink(g);
  EXPECT_FALSE(n.added_source);
  EXPECT_FALSE(n.added_sink);
  EXPECT_EQ(n.dag, g);
}

TEST(Normalize, PreservesWorkAndSpan) {
  // sources 0, 1, 2; sinks 3, 4
  const Dag g({1, 2, 1, 3, 3}, {{0, 3}, {1, 3}, {2, 4}, {1, 4}});
  EXPECT_EQ(work(g), 10);
  EXPECT_EQ(span(g), 5);
  const auto n = normalize_source_sink(g);
  EXPECT_TRUE(n.added_source && n.added_sink);
  EXPECT_EQ(work(n.dag), 10);
  EXPECT_EQ(span(n.dag), 5);
}

TEST(WorkSpan, Reconstruction) {
  const Dag g = fixtures::reconstruction_dag();
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(work(g), 13);
  EXPECT_EQ(span(g), 8);
}

TEST(WorkSpan, SmallCases) {
  EXPECT_EQ(work(Dag({5}, {})), 5);
  EXPECT_EQ(span(fixtures::chain({2, 3, 4})), 9);
  EXPECT_EQ(work(fixtures::diamond(1, 2, 3, 1)), 7);
  EXPECT_EQ(span(fixtures::diamond(1, 2, 3, 1)), 5);
}

TEST(Asap, Examples) {
  EXPECT_EQ(asap_start_times(fixtures::chain({3, 4})), (std::vector<Time>{0, 3}));
  EXPECT_EQ(asap_start_times(fixtures::diamond(0, 2, 5, 1))[3], 5);
  const Dag g = fixtures::reconstruction_dag();
  const std::vector<Time> zero(g.size(), 0);
  EXPECT_EQ(asap_start_times(g, zero), std::vector<Time>(g.size(), 0));
  const std::vector<Time> too_big{3, 3, 2, 4, 1, 1};
  EXPECT_THROW(asap_start_times(g, too_big), std::invalid_argument);
}

TEST(Paths, Examples) {
  const auto p = enumerate_paths(fixtures::chain({1, 1, 1}), 2);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(enumerate_paths(fixtures::diamond(1, 1, 1, 1), 3).size(), 2u);
}

TEST(Paths, ExplosionGuard) {
  // 20 layers of 2 fully connected vertices: 2^20 paths to the sink.
  std::vector<Time> w;
  std::vector<Edge> e;
  const int layers = 20;
  for (int l = 0; l < layers; ++l) {
    w.push_back(1);
    w.push_back(1);
    if (l > 0)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) e.push_back({2 * (l - 1) + a, 2 * l + b});
  }
  w.push_back(1);
  e.push_back({2 * layers - 2, 2 * layers});
  e.push_back({2 * layers - 1, 2 * layers});
  const Dag g(w, e);
  EXPECT_THROW(enumerate_paths(g, 2 * layers), PathExplosionError);
  EXPECT_EQ(count_paths(g, 2 * layers), kDefaultPathCap + 1);
}

TEST(DagProperties, RandomGraphs) {
  auto cfg = fixtures::small_config(12, 6, 0.3);
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Dag g = gen_dag(cfg, rng);
    const Time C = work(g), L = span(g);
    EXPECT_LE(L, C);
    // equality iff some path holds every positive-WCET vertex
    bool covers = false;
    const auto n = normalize_source_sink(g);
    for (const auto& path : enumerate_paths(n.dag, n.sink)) {
      Time sum = 0;
      for (int v : path) sum += n.dag.wcet(v);
      covers = covers || sum == C;
    }
    EXPECT_EQ(covers, L == C);

    const auto s = asap_start_times(g);
    Time finish = 0;
    for (std::size_t v = 0; v < g.size(); ++v) finish = std::max(finish, s[v] + g.wcet(static_cast<int>(v)));
    EXPECT_EQ(finish, L);

    EXPECT_EQ(work(n.dag), C);
    EXPECT_EQ(span(n.dag), L);
    const auto sn = asap_start_times(n.dag);
    for (std::size_t v = 0; v < g.size(); ++v) EXPECT_EQ(sn[v], s[v]);

    for (int v = 0; v < static_cast<int>(n.dag.size()); ++v) {
      Time longest = 0;
      for (const auto& path : enumerate_paths(n.dag, v)) {
        Time d = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) d += n.dag.wcet(path[k]);
        longest = std::max(longest, d);
      }
      EXPECT_EQ(longest, sn[static_cast<std::size_t>(v)]);
    }
  }
}
