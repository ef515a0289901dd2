#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "sdnlb/allocator.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb {

inline constexpr double kUncapped = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultRttWindowBytes = 64.0 * 1024.0;

/// Abstract max-min problem: flows cross sets of capacitated links and
/// may carry their own rate ceiling.
struct FairShareProblem {
  std::vector<double> link_capacity;
  std::vector<std::vector<std::size_t>> flow_links;
  std::vector<double> flow_cap;  // kUncapped when absent; may be shorter than flow_links
};

/// Progressive filling: all unfrozen flows rise together; whenever a link
/// saturates (lowest link index first on ties) or a flow reaches its
/// ceiling, those flows freeze. Throws if a flow has neither links nor a
/// finite ceiling.
std::vector<double> solve_max_min(const FairShareProblem& problem);

struct Flow {
  std::string src;                 // user host
  std::string dst;                 // server host
  std::vector<std::string> path;   // switch sequence
  std::vector<std::size_t> links;  // topology link indices, access links included
  double rtt_ms = 0.0;             // 2 x path delay
  double rate_mbps = 0.0;
};

/// Per-flow ceiling from a TCP window over the flow's RTT, in Mbps.
double window_rate_cap(double rtt_window_bytes, double rtt_ms);

/// Resolves links and RTT for a user -> server flow along `path`.
Flow make_flow(const Topology& topology, std::string src, std::string dst,
               std::vector<std::string> path);

/// Max-min fair rates for the flows with each flow additionally capped at
/// window_rate_cap(rtt_window_bytes, rtt_ms). Links are taken from
/// Flow::links. Throws Error(invalid_argument) for a flow with no path.
std::vector<double> max_min_fair_rates(const std::vector<Flow>& flows, const Topology& topology,
                                       double rtt_window_bytes = kDefaultRttWindowBytes);

struct SingleServerBurst {
  std::string server_id;
  std::int64_t requests = 0;
};
struct BigClusterRoundRobin {
  std::int64_t requests = 0;
};
struct ClusteredRoundRobin {
  std::int64_t requests_per_cluster = 0;
};
using ExperimentState = std::variant<SingleServerBurst, BigClusterRoundRobin, ClusteredRoundRobin>;

std::string state_name(const ExperimentState& state);

struct Scenario {
  Topology topology;
  PoolSet pools;
  ExperimentState state;
  double duration_s = 10.0;
  double rtt_window_bytes = kDefaultRttWindowBytes;
};

struct ServerStats {
  std::string server_id;
  int cluster = -1;  // cluster index in the scenario's pools
  std::int64_t requests = 0;
  double bytes_mb = 0.0;
  double bandwidth_mbps = 0.0;

  bool operator==(const ServerStats&) const = default;
};

struct ExperimentReport {
  std::string state;
  std::uint64_t topology_fingerprint = 0;
  double duration_s = 0.0;
  std::vector<ServerStats> servers;  // server-id order
  std::string user_id;
  std::int64_t total_requests = 0;
  double user_total_bytes_mb = 0.0;
  double user_bandwidth_mbps = 0.0;
  std::vector<Flow> flows;

  const ServerStats& server(std::string_view id) const;
};

/// Every request becomes one flow from the user host, all flows active for
/// the whole window. Bytes are megabytes (1e6 bytes).
ExperimentReport run_experiment(const Scenario& scenario);

/// `entity,kind,requests,bytes_mb,bandwidth_mbps,cluster`, one row per
/// server then a `user` row, 4 decimals.
std::string report_csv(const ExperimentReport& report);

struct ClusterAggregate {
  std::string state;
  int cluster = -1;  // -1 for the user-side total
  std::int64_t requests = 0;
  double bytes_mb = 0.0;
  double bandwidth_mbps = 0.0;
  double delta_bytes_mb = 0.0;  // relative to the first report
  double delta_bandwidth_mbps = 0.0;
};

struct ComparisonTable {
  std::vector<ClusterAggregate> rows;

  const ClusterAggregate& find(std::string_view state, int cluster) const;
  std::string csv() const;
};

/// Per-cluster aggregates per report plus deltas against reports[0].
/// Throws Error(validation) if the reports come from different topologies.
ComparisonTable compare_reports(const std::vector<ExperimentReport>& reports);

}  // namespace sdnlb
