#include <gtest/gtest.h>

#include <random>

#include "random_graphs.hpp"
#include "sdnlb/error.hpp"
#include "sdnlb/kmeans.hpp"
#include "sdnlb/paths.hpp"
#include "sdnlb/simulator.hpp"

namespace sdnlb {
namespace {

Scenario reference_scenario(ExperimentState state) {
  Topology t = build_paper_topology();
  const FeatureSet f = server_features(t, all_pairs_shortest_paths(t));
  PoolSet pools = build_pools(kmeans_cluster(f, ClusteringConfig{}), f);
  return Scenario{std::move(t), std::move(pools), std::move(state)};
}

std::vector<double> cluster_bytes(const ExperimentReport& r, const PoolSet& pools) {
  std::vector<double> bytes;
  for (const Pool& p : pools.pools()) {
    double sum = 0.0;
    for (const auto& m : p.members) sum += r.server(m).bytes_mb;
    bytes.push_back(sum);
  }
  return bytes;
}

TEST(FairShare, SingleFlowSaturates) {
  const auto r = solve_max_min({{100.0}, {{0}}, {}});
  EXPECT_DOUBLE_EQ(r[0], 100.0);
}

TEST(FairShare, EqualSplit) {
  FairShareProblem p{{100.0}, std::vector<std::vector<std::size_t>>(10, {0}), {}};
  for (double r : solve_max_min(p)) EXPECT_DOUBLE_EQ(r, 10.0);
}

TEST(FairShare, ClassicParkingLot) {
  // Long flow across both links, one short flow on each.
  const auto r = solve_max_min({{10.0, 4.0}, {{0, 1}, {0}, {1}}, {}});
  EXPECT_DOUBLE_EQ(r[0], 2.0);
  EXPECT_DOUBLE_EQ(r[1], 8.0);
  EXPECT_DOUBLE_EQ(r[2], 2.0);
}

TEST(FairShare, CapFreesCapacityForOthers) {
  const auto r = solve_max_min({{100.0}, {{0}, {0}}, {10.0, kUncapped}});
  EXPECT_DOUBLE_EQ(r[0], 10.0);
  EXPECT_DOUBLE_EQ(r[1], 90.0);
}

TEST(FairShare, Errors) {
  EXPECT_THROW(solve_max_min({{1.0}, {{}}, {}}), Error);
  EXPECT_THROW(solve_max_min({{1.0}, {{3}}, {}}), Error);
  EXPECT_EQ(solve_max_min({{1.0}, {{}}, {5.0}})[0], 5.0);
}

TEST(FairShare, MatchesOracleOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_links(1, 6);
  std::uniform_int_distribution<int> n_flows(1, 8);
  std::uniform_real_distribution<double> cap(1.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    FairShareProblem p;
    const int links = n_links(rng);
    for (int e = 0; e < links; ++e) p.link_capacity.push_back(std::round(cap(rng)));
    const int flows = n_flows(rng);
    for (int f = 0; f < flows; ++f) {
      std::vector<std::size_t> path;
      for (int e = 0; e < links; ++e)
        if (unit(rng) < 0.5) path.push_back(static_cast<std::size_t>(e));
      if (path.empty()) path.push_back(static_cast<std::size_t>(std::uniform_int_distribution<int>(0, links - 1)(rng)));
      p.flow_links.push_back(path);
      p.flow_cap.push_back(unit(rng) < 0.3 ? std::round(cap(rng)) / 2 : kUncapped);
    }
    const auto rates = solve_max_min(p);
    ASSERT_TRUE(testing::is_max_min_fair(p.link_capacity, p.flow_links, p.flow_cap, rates, 1e-9))
        << "trial " << trial;
    const auto oracle = testing::water_fill_oracle(p.link_capacity, p.flow_links, p.flow_cap);
    for (std::size_t f = 0; f < rates.size(); ++f) ASSERT_NEAR(rates[f], oracle[f], 1e-6) << trial;
    std::vector<double> load(p.link_capacity.size(), 0.0);
    for (std::size_t f = 0; f < rates.size(); ++f)
      for (std::size_t e : p.flow_links[f]) load[e] += rates[f];
    for (std::size_t e = 0; e < load.size(); ++e) ASSERT_LE(load[e], p.link_capacity[e] + 1e-9);
  }
}

TEST(WindowCap, Units) {
  EXPECT_DOUBLE_EQ(window_rate_cap(65536, 24.0), 65536 * 8.0 / 24000.0);
  EXPECT_EQ(window_rate_cap(65536, 0.0), kUncapped);
}

TEST(Flows, PathAndRtt) {
  const Topology t = build_paper_topology();
  const PathMatrix paths = all_pairs_shortest_paths(t);
  const Flow f = make_flow(t, "u1", "h9", paths.path("s1", "s7"));
  EXPECT_EQ(f.path.front(), "s1");
  EXPECT_EQ(f.path.back(), "s7");
  EXPECT_EQ(f.links.size(), f.path.size() + 1);
  EXPECT_NEAR(f.rtt_ms, 2 * 30.33, 1e-9);
  EXPECT_THROW(make_flow(t, "u1", "h1", {}), Error);
  EXPECT_THROW(make_flow(t, "u1", "h1", {"s1", "s6"}), Error);
}

TEST(Experiment, SingleServerBurst) {
  const auto r = run_experiment(reference_scenario(SingleServerBurst{"h3", 30}));
  EXPECT_EQ(r.state, "single-server");
  for (const auto& s : r.servers) EXPECT_EQ(s.requests, s.server_id == "h3" ? 30 : 0);
  EXPECT_EQ(r.total_requests, 30);
  // Thirty flows share h3's access link.
  EXPECT_NEAR(r.server("h3").bandwidth_mbps, 100.0, 1e-9);
  EXPECT_THROW(run_experiment(reference_scenario(SingleServerBurst{"s3", 30})), Error);
}

TEST(Experiment, BigClusterRoundRobin) {
  const auto r = run_experiment(reference_scenario(BigClusterRoundRobin{30}));
  std::vector<std::int64_t> counts;
  for (const auto& s : r.servers) counts.push_back(s.requests);
  EXPECT_EQ(counts, (std::vector<std::int64_t>{4, 4, 4, 3, 3, 3, 3, 3, 3}));
}

TEST(Experiment, ClusteredRoundRobin) {
  const Scenario sc = reference_scenario(ClusteredRoundRobin{10});
  const auto r = run_experiment(sc);
  EXPECT_EQ(r.total_requests, 30);
  for (const Pool& p : sc.pools.pools()) {
    EXPECT_EQ(r.server(p.members[0]).requests, 4);
    EXPECT_EQ(r.server(p.members[1]).requests, 3);
    EXPECT_EQ(r.server(p.members[2]).requests, 3);
  }
}

TEST(Experiment, ReportInvariants) {
  for (const ExperimentState& state :
       {ExperimentState{SingleServerBurst{"h5", 7}}, ExperimentState{BigClusterRoundRobin{30}},
        ExperimentState{ClusteredRoundRobin{10}}, ExperimentState{ClusteredRoundRobin{1}}}) {
    const Scenario sc = reference_scenario(state);
    const auto r = run_experiment(sc);
    double bytes = 0.0;
    std::int64_t requests = 0;
    for (const auto& s : r.servers) {
      bytes += s.bytes_mb;
      requests += s.requests;
      EXPECT_NEAR(s.bandwidth_mbps, s.bytes_mb * 8 / r.duration_s, 1e-9);
    }
    EXPECT_NEAR(bytes, r.user_total_bytes_mb, 1e-9);
    EXPECT_EQ(requests, r.total_requests);
    std::vector<double> load(sc.topology.links().size(), 0.0);
    for (const Flow& f : r.flows) {
      EXPECT_LE(f.rate_mbps, window_rate_cap(sc.rtt_window_bytes, f.rtt_ms) + 1e-9);
      for (std::size_t e : f.links) load[e] += f.rate_mbps;
    }
    for (std::size_t e = 0; e < load.size(); ++e)
      EXPECT_LE(load[e], sc.topology.links()[e].capacity_mbps + 1e-9);
  }
}

TEST(Experiment, Deterministic) {
  const auto a = run_experiment(reference_scenario(ClusteredRoundRobin{10}));
  const auto b = run_experiment(reference_scenario(ClusteredRoundRobin{10}));
  EXPECT_EQ(a.servers, b.servers);
  EXPECT_EQ(report_csv(a), report_csv(b));
}

TEST(Experiment, ClusterOrderingUnderDefaultModel) {
  const Scenario sc = reference_scenario(ClusteredRoundRobin{10});
  const auto bytes = cluster_bytes(run_experiment(sc), sc.pools);
  EXPECT_GE(bytes[0], bytes[1]);
  EXPECT_GE(bytes[1], bytes[2]);
  const auto big = run_experiment(reference_scenario(BigClusterRoundRobin{30}));
  EXPECT_GE(run_experiment(sc).user_total_bytes_mb, big.user_total_bytes_mb - 1e-9);
}

TEST(Experiment, NearerClustersWinWhenTheUserLinkIsNotSaturated) {
  const Scenario sc = reference_scenario(ClusteredRoundRobin{1});
  const auto bytes = cluster_bytes(run_experiment(sc), sc.pools);
  EXPECT_GT(bytes[0], bytes[1]);
  EXPECT_GT(bytes[1], bytes[2]);
}

TEST(Experiment, ZeroRequests) {
  const auto r = run_experiment(reference_scenario(BigClusterRoundRobin{0}));
  EXPECT_EQ(r.user_total_bytes_mb, 0.0);
  for (const auto& s : r.servers) EXPECT_EQ(s.requests, 0);
}

TEST(Experiment, InvalidScenario) {
  Scenario sc = reference_scenario(BigClusterRoundRobin{3});
  sc.duration_s = 0;
  EXPECT_THROW(run_experiment(sc), Error);
  sc = reference_scenario(ClusteredRoundRobin{-1});
  EXPECT_THROW(run_experiment(sc), Error);
  sc = reference_scenario(BigClusterRoundRobin{3});
  sc.pools = single_pool({"h1", "ghost"});
  EXPECT_THROW(run_experiment(sc), Error);
}

TEST(ReportCsv, Layout) {
  const auto r = run_experiment(reference_scenario(SingleServerBurst{"h3", 30}));
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "entity,kind,requests,bytes_mb,bandwidth_mbps,cluster");
  EXPECT_NE(csv.find("h3,server,30,125.0000,100.0000,0\n"), std::string::npos);
  EXPECT_NE(csv.find("u1,user,30,125.0000,100.0000,\n"), std::string::npos);
}

TEST(Compare, IdenticalReportsHaveZeroDeltas) {
  const auto r = run_experiment(reference_scenario(ClusteredRoundRobin{10}));
  const ComparisonTable table = compare_reports({r, r});
  ASSERT_EQ(table.rows.size(), 8u);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.delta_bytes_mb, 0.0);
    EXPECT_EQ(row.delta_bandwidth_mbps, 0.0);
  }
  EXPECT_EQ(table.find("clustered", -1).requests, 30);
  EXPECT_THROW(table.find("nope", 0), Error);
}

TEST(Compare, DeltasAgainstFirstReport) {
  const auto burst = run_experiment(reference_scenario(SingleServerBurst{"h3", 30}));
  const auto clustered = run_experiment(reference_scenario(ClusteredRoundRobin{1}));
  const ComparisonTable table = compare_reports({burst, clustered});
  const auto& row = table.find("clustered", -1);
  EXPECT_NEAR(row.delta_bytes_mb, clustered.user_total_bytes_mb - burst.user_total_bytes_mb, 1e-12);
}

TEST(Compare, MismatchedTopologiesThrow) {
  const auto a = run_experiment(reference_scenario(BigClusterRoundRobin{3}));
  DelayProfile profile;
  profile.host_ms = 1.0;
  Topology other = build_paper_topology(profile);
  const FeatureSet f = server_features(other, all_pairs_shortest_paths(other));
  Scenario sc{other, build_pools(kmeans_cluster(f, ClusteringConfig{}), f), BigClusterRoundRobin{3}};
  EXPECT_THROW(compare_reports({a, run_experiment(sc)}), Error);
}

}  // namespace
}  // namespace sdnlb
