#include <gtest/gtest.h>

#include <random>

#include "random_graphs.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/paths.hpp"

namespace sdnlb {
namespace {

TEST(Apsp, ReferenceTopologyHopCountsByLevel) {
  const Topology t = build_paper_topology();
  const PathMatrix pm = all_pairs_shortest_paths(t);
  const std::size_t user = pm.index_of("s1");
  for (const auto& sw : t.switch_ids()) {
    const int level = *t.node(sw).level;
    EXPECT_EQ(pm.hops(user, pm.index_of(sw)), level - 1) << sw;
  }
}

TEST(Apsp, DiagonalIsZero) {
  const PathMatrix pm = all_pairs_shortest_paths(build_paper_topology());
  for (std::size_t i = 0; i < pm.size(); ++i) {
    EXPECT_EQ(pm.hops(i, i), 0);
    EXPECT_EQ(pm.delay_ms(i, i), 0.0);
    EXPECT_EQ(pm.path(i, i), std::vector<std::size_t>{i});
  }
}

TEST(Apsp, PrefersFewerHopsThenLowerDelay) {
  // s1-s2-s4 is 2 hops / 20 ms; s1-s3-s4 is 2 hops / 3 ms; s1-s5-s6-s4 is
  // 3 hops / 0.3 ms.
  std::vector<Node> nodes;
  for (const char* id : {"s1", "s2", "s3", "s4", "s5", "s6"}) nodes.push_back({id, NodeKind::switch_node, {}, ""});
  std::vector<Link> links{{"s1", "s2", 10, 100}, {"s2", "s4", 10, 100}, {"s1", "s3", 1, 100},
                          {"s3", "s4", 2, 100},  {"s1", "s5", 0.1, 100}, {"s5", "s6", 0.1, 100},
                          {"s6", "s4", 0.1, 100}};
  const Topology t = Topology::create(nodes, links, "s1");
  const PathMatrix pm = all_pairs_shortest_paths(t);
  EXPECT_EQ(pm.hops(pm.index_of("s1"), pm.index_of("s4")), 2);
  EXPECT_DOUBLE_EQ(pm.delay_ms(pm.index_of("s1"), pm.index_of("s4")), 3.0);
  EXPECT_EQ(pm.path("s1", "s4"), (std::vector<std::string>{"s1", "s3", "s4"}));
}

TEST(Apsp, EqualCostTieGoesToLowestIntermediate) {
  std::vector<Node> nodes;
  for (const char* id : {"a", "b", "c", "d"}) nodes.push_back({id, NodeKind::switch_node, {}, ""});
  std::vector<Link> links{{"a", "c", 1, 100}, {"c", "d", 1, 100}, {"a", "b", 1, 100}, {"b", "d", 1, 100}};
  const PathMatrix pm = all_pairs_shortest_paths(Topology::create(nodes, links, "a"));
  EXPECT_EQ(pm.path("a", "d"), (std::vector<std::string>{"a", "b", "d"}));
  EXPECT_EQ(pm.path("d", "a"), (std::vector<std::string>{"d", "b", "a"}));
}

TEST(Apsp, ZeroDelaysKeepHopCounts) {
  DelayProfile zero;
  zero.tier_ms = {0.0, 0.0, 0.0};
  const PathMatrix with_delay = all_pairs_shortest_paths(build_paper_topology());
  const PathMatrix without = all_pairs_shortest_paths(build_paper_topology(zero));
  for (std::size_t i = 0; i < without.size(); ++i)
    for (std::size_t j = 0; j < without.size(); ++j) {
      EXPECT_EQ(without.delay_ms(i, j), 0.0);
      EXPECT_EQ(without.hops(i, j), with_delay.hops(i, j));
    }
}

TEST(Apsp, MatchesBfsOnRandomUnitGraphs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Topology t = testing::random_topology(rng);
    const PathMatrix pm = all_pairs_shortest_paths(t);
    const auto bfs = testing::bfs_hops(t);
    for (std::size_t i = 0; i < pm.size(); ++i)
      for (std::size_t j = 0; j < pm.size(); ++j) ASSERT_EQ(pm.hops(i, j), bfs[i][j]) << trial;
  }
}

TEST(Apsp, PathPropertiesOnRandomWeightedGraphs) {
  std::mt19937_64 rng(77);
  testing::RandomGraphOptions opt;
  opt.unit_delays = false;
  for (int trial = 0; trial < 20; ++trial) {
    const Topology t = testing::random_topology(rng, opt);
    const PathMatrix pm = all_pairs_shortest_paths(t);
    const std::size_t n = pm.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(pm.hops(i, j), pm.hops(j, i));
        EXPECT_NEAR(pm.delay_ms(i, j), pm.delay_ms(j, i), 1e-9);
        for (std::size_t m = 0; m < n; ++m) {
          ASSERT_LE(pm.hops(i, j), pm.hops(i, m) + pm.hops(m, j));
        }
        const auto path = pm.path(i, j);
        ASSERT_EQ(static_cast<int>(path.size()) - 1, pm.hops(i, j));
        double delay = 0.0;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
          const auto link = t.link_index(pm.switch_ids()[path[s]], pm.switch_ids()[path[s + 1]]);
          ASSERT_TRUE(link.has_value());
          delay += t.links()[*link].delay_ms;
        }
        EXPECT_NEAR(delay, pm.delay_ms(i, j), 1e-9);
      }
    }
  }
}

TEST(ServerFeatures, ReferenceTopologyPointsPerLevel) {
  const Topology t = build_paper_topology();
  const FeatureSet f = server_features(t, all_pairs_shortest_paths(t));
  ASSERT_EQ(f.size(), 9u);
  const double expected_delay[] = {0, 0, 12.0, 22.0, 30.33};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int level = *t.node(f.server_ids[i]).level;
    EXPECT_EQ(f.points[i].hops, level - 1);
    EXPECT_NEAR(f.points[i].delay_ms, expected_delay[level], 1e-12);
  }
  EXPECT_EQ(f.server_ids.front(), "h1");
  EXPECT_EQ(f.points[1], f.points[2]);  // h2 and h3 share switch s3
}

TEST(ServerFeatures, ServerOnUserSwitchIsOrigin) {
  std::vector<Node> nodes{{"s1", NodeKind::switch_node, {}, ""},
                          {"u1", NodeKind::user_host, {}, ""},
                          {"h1", NodeKind::server_host, {}, ""}};
  std::vector<Link> links{{"s1", "u1", 0, 100}, {"s1", "h1", 0, 100}};
  const Topology t = Topology::create(nodes, links, "s1");
  const FeatureSet f = server_features(t, all_pairs_shortest_paths(t));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.points[0], (FeaturePoint{0, 0.0}));
}

}  // namespace
}  // namespace sdnlb
