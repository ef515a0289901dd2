#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sdnlb/allocator.hpp"
#include "sdnlb/error.hpp"
#include "sdnlb/kmeans.hpp"
#include "sdnlb/paths.hpp"

namespace sdnlb {
namespace {

struct ReferencePools {
  Topology topology = build_paper_topology();
  FeatureSet features = server_features(topology, all_pairs_shortest_paths(topology));
  ClusterModel model = kmeans_cluster(features, ClusteringConfig{});
  PoolSet pools = build_pools(model, features);
};

std::vector<std::string> nine_servers() {
  std::vector<std::string> s;
  for (int i = 1; i <= 9; ++i) s.push_back("h" + std::to_string(i));
  return s;
}

TEST(Pools, ReferenceModelGivesThreeLevelPools) {
  ReferencePools p;
  ASSERT_EQ(p.pools.size(), 3u);
  EXPECT_EQ(p.pools.pools()[0].members, (std::vector<std::string>{"h1", "h2", "h3"}));
  EXPECT_EQ(p.pools.pools()[1].members, (std::vector<std::string>{"h4", "h5", "h6"}));
  EXPECT_EQ(p.pools.pools()[2].members, (std::vector<std::string>{"h7", "h8", "h9"}));
  for (const Pool& pool : p.pools.pools()) EXPECT_EQ(pool.cursor, 0u);
  EXPECT_EQ(p.pools.servers(), nine_servers());
}

TEST(Pools, SingletonAndSingleClusterModels) {
  ReferencePools p;
  ClusteringConfig config;
  config.k = 1;
  EXPECT_EQ(build_pools(kmeans_cluster(p.features, config), p.features).size(), 1u);
  config.k = 9;
  const PoolSet singletons = build_pools(kmeans_cluster(p.features, config), p.features);
  ASSERT_EQ(singletons.size(), 9u);
  for (const Pool& pool : singletons.pools()) EXPECT_EQ(pool.members.size(), 1u);
}

TEST(Pools, MissingServerIsAnError) {
  ReferencePools p;
  ClusterModel partial = p.model;
  partial.server_ids.pop_back();
  partial.assignment.pop_back();
  EXPECT_THROW(build_pools(partial, p.features), Error);
}

TEST(Pools, InvalidPoolsRejected) {
  EXPECT_THROW(PoolSet({Pool{0, {}, 0, {}}}), Error);
  EXPECT_THROW(PoolSet({Pool{0, {"a"}, 0, {}}, Pool{1, {"a"}, 0, {}}}), Error);
  EXPECT_THROW(PoolSet({Pool{0, {"a"}, 0, {}}, Pool{0, {"b"}, 0, {}}}), Error);
  EXPECT_THROW(PoolSet({Pool{0, {"a"}, 1, {}}}), Error);
}

TEST(RoundRobin, Rotates) {
  PoolSet pools = single_pool({"c", "a", "b"});
  EXPECT_EQ(assign_request(pools, 0), "a");
  EXPECT_EQ(assign_request(pools, 0), "b");
  EXPECT_EQ(assign_request(pools, 0), "c");
  EXPECT_EQ(assign_request(pools, 0), "a");
  EXPECT_THROW(assign_request(pools, 3), Error);
}

TEST(RoundRobin, ThirtyOverNine) {
  PoolSet pools = single_pool(nine_servers());
  const auto counts = distribute_requests(pools, 30, SingleCluster{0});
  std::vector<std::int64_t> in_order;
  for (const std::string& s : nine_servers()) in_order.push_back(counts.at(s));
  EXPECT_EQ(in_order, (std::vector<std::int64_t>{4, 4, 4, 3, 3, 3, 3, 3, 3}));
}

TEST(RoundRobin, TenOverThree) {
  PoolSet pools = single_pool({"h1", "h2", "h3"});
  const auto counts = distribute_requests(pools, 10, SingleCluster{0});
  EXPECT_EQ(counts.at("h1"), 4);
  EXPECT_EQ(counts.at("h2"), 3);
  EXPECT_EQ(counts.at("h3"), 3);
}

TEST(RoundRobin, BalancedAfterAnyPrefix) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int size = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<std::string> members;
    for (int i = 0; i < size; ++i) members.push_back("m" + std::to_string(10 + i));
    PoolSet pools = single_pool(members);
    std::map<std::string, int> counts;
    for (const auto& m : members) counts[m] = 0;
    const int calls = std::uniform_int_distribution<int>(0, 200)(rng);
    for (int c = 0; c < calls; ++c) {
      ++counts[assign_request(pools, 0)];
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end(),
                                                [](auto& a, auto& b) { return a.second < b.second; });
      ASSERT_LE(hi->second - lo->second, 1);
    }
  }
}

TEST(Distribute, EqualPerClusterOnReferencePools) {
  ReferencePools p;
  const auto counts = distribute_requests(p.pools, 30, EqualPerCluster{});
  for (const Pool& pool : p.pools.pools()) {
    EXPECT_EQ(counts.at(pool.members[0]), 4);
    EXPECT_EQ(counts.at(pool.members[1]), 3);
    EXPECT_EQ(counts.at(pool.members[2]), 3);
  }
}

TEST(Distribute, RemainderGoesToHighestPriority) {
  ReferencePools p;
  const auto seq = dispatch_requests(p.pools, 5, EqualPerCluster{});
  // floor(5/3) = 1 each, two extra to the first two pools.
  EXPECT_EQ(seq, (std::vector<std::string>{"h1", "h2", "h4", "h5", "h7"}));
}

TEST(Distribute, SingleServerAndZero) {
  ReferencePools p;
  const auto burst = distribute_requests(p.pools, 30, SingleServer{"h3"});
  EXPECT_EQ(burst.size(), 9u);
  for (const auto& [server, n] : burst) EXPECT_EQ(n, server == "h3" ? 30 : 0);
  for (const auto& [server, n] : distribute_requests(p.pools, 0, EqualPerCluster{})) EXPECT_EQ(n, 0);
  EXPECT_THROW(distribute_requests(p.pools, 3, SingleServer{"h42"}), Error);
  EXPECT_THROW(distribute_requests(p.pools, 3, SingleCluster{7}), Error);
  EXPECT_THROW(distribute_requests(p.pools, -1, EqualPerCluster{}), Error);
  PoolSet none;
  EXPECT_THROW(distribute_requests(none, 1, EqualPerCluster{}), Error);
}

TEST(Distribute, ConservesRequests) {
  std::mt19937_64 rng(4);
  ReferencePools p;
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, 500)(rng);
    const RequestSplit split = trial % 3 == 0   ? RequestSplit{EqualPerCluster{}}
                               : trial % 3 == 1 ? RequestSplit{SingleCluster{trial % 3}}
                                                : RequestSplit{SingleServer{"h7"}};
    const auto counts = distribute_requests(p.pools, r, split);
    std::int64_t sum = 0;
    for (const auto& [s, n] : counts) sum += n;
    ASSERT_EQ(sum, r);
  }
}

TEST(LoadFormula, PrintedValues) {
  EXPECT_EQ(avg_load_largest_cluster(30, 3, 9), Rational(30, 21));
  EXPECT_EQ(avg_load_largest_cluster(30, 1, 9), Rational(30, 9));
  EXPECT_EQ(avg_load_largest_cluster(30, 5, 9), Rational(30, 25));
  EXPECT_EQ(avg_load_largest_cluster(0, 4, 9), Rational(0));
  EXPECT_THROW(avg_load_largest_cluster(30, 0, 9), Error);
  EXPECT_THROW(avg_load_largest_cluster(30, 10, 9), Error);
  EXPECT_THROW(avg_load_largest_cluster(-1, 1, 9), Error);
}

TEST(LoadFormula, SymmetricInK) {
  for (std::int64_t r : {0, 1, 30, 1000})
    for (int n = 1; n <= 30; ++n)
      for (int k = 1; k <= n; ++k)
        ASSERT_EQ(avg_load_largest_cluster(r, k, n), avg_load_largest_cluster(r, n + 1 - k, n));
}

TEST(LoadFormula, MinimumInTheMiddle) {
  for (int n = 1; n <= 30; ++n) {
    int best = 1;
    for (int k = 2; k <= n; ++k)
      if (avg_load_largest_cluster(30, k, n) < avg_load_largest_cluster(30, best, n)) best = k;
    EXPECT_TRUE(best == (n + 1) / 2 || best == (n + 2) / 2) << n;
  }
}

TEST(Table1, ReproducesPrintedRows) {
  const auto rows = table1(9, 30, 1, 9);
  ASSERT_EQ(rows.size(), 9u);
  const char* servers[] = {"9", "4.5", "3", "2.25", "1.8", "1.5", "1.28", "1.125", "1"};
  const char* load[] = {"3.33", "1.875", "1.428", "1.25", "1.2", "1.25", "1.428", "1.875", "3.33"};
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(rows[i].k, static_cast<int>(i + 1));
    EXPECT_TRUE(matches_printed(rows[i].avg_servers_per_cluster, servers[i])) << i;
    EXPECT_EQ(rows[i].capacity_multiplier_pct, 100 * static_cast<int>(i + 1));
    EXPECT_TRUE(matches_printed(rows[i].avg_load_largest_cluster, load[i])) << i;
    EXPECT_EQ(rows[i].avg_servers_per_cluster, Rational(9, static_cast<std::int64_t>(i + 1)));
  }
  EXPECT_THROW(table1(9, 30, 0, 9), Error);
  EXPECT_THROW(table1(9, 30, 1, 10), Error);
}

TEST(Printed, TruncationRule) {
  EXPECT_TRUE(matches_printed(Rational(10, 7), "1.428"));
  EXPECT_FALSE(matches_printed(Rational(10, 7), "1.429"));
  EXPECT_TRUE(matches_printed(Rational(10, 3), "3.33"));
  EXPECT_TRUE(matches_printed(Rational(9, 7), "1.28"));
  EXPECT_FALSE(matches_printed(Rational(9, 7), "1.3"));
  EXPECT_TRUE(matches_printed(Rational(6, 5), "1.2"));
  EXPECT_FALSE(matches_printed(Rational(1), "x"));
  EXPECT_FALSE(matches_printed(Rational(1), ""));
  EXPECT_EQ(truncate_decimal(Rational(10, 7), 3), "1.428");
  EXPECT_EQ(truncate_decimal(Rational(3, 2), 3), "1.5");
  EXPECT_EQ(truncate_decimal(Rational(9), 3), "9");
  EXPECT_EQ(truncate_decimal(Rational(10, 3), 0), "3");
  EXPECT_EQ(truncate_decimal(Rational(-5, 4), 1), "-1.2");
}

TEST(Export, PoolPayloadShape) {
  ReferencePools p;
  const auto doc = export_pools(p.pools, &p.topology);
  ASSERT_EQ(doc["pools"].size(), 3u);
  const auto& first = doc["pools"][0];
  EXPECT_EQ(first["vip_label"], "cluster-1");
  EXPECT_EQ(first["policy"], "round-robin");
  EXPECT_EQ(first["members"][0]["server_id"], "h1");
  EXPECT_FALSE(first["members"][0]["address_label"].get<std::string>().empty());
  std::vector<std::string> keys;
  for (const auto& [key, value] : first.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"pool_id", "vip_label", "members", "policy"}));
  EXPECT_EQ(export_pools(p.pools).dump(), export_pools(p.pools).dump());
}

TEST(Capacity, OneDatasetPerPool) {
  ReferencePools p;
  for (int k = 1; k <= 9; ++k) {
    ClusteringConfig config;
    config.k = k;
    EXPECT_EQ(build_pools(kmeans_cluster(p.features, config), p.features).distinct_dataset_capacity(),
              static_cast<std::size_t>(k));
  }
}

}  // namespace
}  // namespace sdnlb
