#include "sdnlb/simulator.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <sstream>

#include "sdnlb/error.hpp"
#include "sdnlb/paths.hpp"

namespace sdnlb {

double window_rate_cap(double rtt_window_bytes, double rtt_ms) {
  if (rtt_ms <= 0.0) return kUncapped;
  // bytes * 8 bits over rtt_ms / 1000 seconds, in 1e6 bits per second
  return rtt_window_bytes * 8.0 / (rtt_ms * 1000.0);
}

Flow make_flow(const Topology& topology, std::string src, std::string dst,
               std::vector<std::string> path) {
  if (path.empty()) {
    throw Error(ErrorKind::invalid_argument, "flow " + src + " -> " + dst + " has no path");
  }
  Flow flow;
  double delay = 0.0;
  const Link& up = topology.host_link(src);
  flow.links.push_back(*topology.link_index(up.a, up.b));
  delay += up.delay_ms;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto idx = topology.link_index(path[i], path[i + 1]);
    if (!idx) {
      throw Error(ErrorKind::invalid_argument,
                  "flow path uses missing link '" + path[i] + "'-'" + path[i + 1] + "'");
    }
    flow.links.push_back(*idx);
    delay += topology.links()[*idx].delay_ms;
  }
  const Link& down = topology.host_link(dst);
  flow.links.push_back(*topology.link_index(down.a, down.b));
  delay += down.delay_ms;

  flow.src = std::move(src);
  flow.dst = std::move(dst);
  flow.path = std::move(path);
  flow.rtt_ms = 2.0 * delay;
  return flow;
}

std::vector<double> max_min_fair_rates(const std::vector<Flow>& flows, const Topology& topology,
                                       double rtt_window_bytes) {
  FairShareProblem problem;
  for (const Link& l : topology.links()) problem.link_capacity.push_back(l.capacity_mbps);
  for (const Flow& f : flows) {
    if (f.path.empty() || f.links.empty()) {
      throw Error(ErrorKind::invalid_argument, "flow " + f.src + " -> " + f.dst + " has no path");
    }
    problem.flow_links.push_back(f.links);
    problem.flow_cap.push_back(window_rate_cap(rtt_window_bytes, f.rtt_ms));
  }
  return solve_max_min(problem);
}

std::string state_name(const ExperimentState& state) {
  if (std::holds_alternative<SingleServerBurst>(state)) return "single-server";
  if (std::holds_alternative<BigClusterRoundRobin>(state)) return "big-cluster";
  return "clustered";
}

const ServerStats& ExperimentReport::server(std::string_view id) const {
  for (const ServerStats& s : servers) {
    if (s.server_id == id) return s;
  }
  throw Error(ErrorKind::not_found, "report has no server '" + std::string(id) + "'");
}

namespace {

std::string pick_user_host(const Topology& topology) {
  const auto users = topology.user_host_ids();
  for (const std::string& u : users) {
    if (topology.attached_switch(u) == topology.user_switch()) return u;
  }
  if (users.empty()) throw Error(ErrorKind::invalid_argument, "topology has no user host");
  return users.front();
}

}  // namespace

ExperimentReport run_experiment(const Scenario& scenario) {
  if (!(scenario.duration_s > 0.0)) throw Error(ErrorKind::invalid_argument, "duration must be positive");
  if (!(scenario.rtt_window_bytes > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "rtt_window_bytes must be positive");
  }
  const Topology& topology = scenario.topology;
  for (const std::string& s : scenario.pools.servers()) {
    const Node* n = topology.find(s);
    if (!n || n->kind != NodeKind::server_host) {
      throw Error(ErrorKind::not_found, "pooled server '" + s + "' is not a server in the topology");
    }
  }

  std::vector<std::string> sequence;
  std::int64_t total = 0;
  if (const auto* burst = std::get_if<SingleServerBurst>(&scenario.state)) {
    const Node* n = topology.find(burst->server_id);
    if (!n || n->kind != NodeKind::server_host) {
      throw Error(ErrorKind::not_found, "unknown target server '" + burst->server_id + "'");
    }
    PoolSet all = single_pool(topology.server_ids());
    sequence = dispatch_requests(all, burst->requests, SingleServer{burst->server_id});
    total = burst->requests;
  } else if (const auto* big = std::get_if<BigClusterRoundRobin>(&scenario.state)) {
    PoolSet all = single_pool(topology.server_ids());
    sequence = dispatch_requests(all, big->requests, EqualPerCluster{});
    total = big->requests;
  } else {
    const auto& clustered = std::get<ClusteredRoundRobin>(scenario.state);
    if (clustered.requests_per_cluster < 0) {
      throw Error(ErrorKind::invalid_argument, "request count must be non-negative");
    }
    PoolSet pools = scenario.pools;
    total = clustered.requests_per_cluster * static_cast<std::int64_t>(pools.size());
    sequence = dispatch_requests(pools, total, EqualPerCluster{});
  }

  const PathMatrix paths = all_pairs_shortest_paths(topology);
  ExperimentReport report;
  report.state = state_name(scenario.state);
  report.topology_fingerprint = fingerprint(topology);
  report.duration_s = scenario.duration_s;
  report.user_id = pick_user_host(topology);
  report.total_requests = total;

  const std::string& user_switch = topology.attached_switch(report.user_id);
  for (const std::string& server : sequence) {
    report.flows.push_back(make_flow(topology, report.user_id, server,
                                     paths.path(user_switch, topology.attached_switch(server))));
  }
  const auto rates = max_min_fair_rates(report.flows, topology, scenario.rtt_window_bytes);
  for (std::size_t i = 0; i < rates.size(); ++i) report.flows[i].rate_mbps = rates[i];

  std::map<std::string, ServerStats> stats;
  for (const std::string& server : topology.server_ids()) {
    ServerStats s;
    s.server_id = server;
    try {
      s.cluster = scenario.pools.cluster_of(server);
    } catch (const Error&) {
      s.cluster = -1;
    }
    stats.emplace(server, std::move(s));
  }
  for (const Flow& f : report.flows) {
    ServerStats& s = stats.at(f.dst);
    ++s.requests;
    s.bytes_mb += f.rate_mbps * scenario.duration_s / 8.0;
  }
  for (auto& [id, s] : stats) {
    s.bandwidth_mbps = s.bytes_mb * 8.0 / scenario.duration_s;
    report.user_total_bytes_mb += s.bytes_mb;
    report.servers.push_back(s);
  }
  report.user_bandwidth_mbps = report.user_total_bytes_mb * 8.0 / scenario.duration_s;
  return report;
}

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "entity,kind,requests,bytes_mb,bandwidth_mbps,cluster\n";
  for (const ServerStats& s : report.servers) {
    out << s.server_id << ",server," << s.requests << ',' << fixed4(s.bytes_mb) << ','
        << fixed4(s.bandwidth_mbps) << ',';
    if (s.cluster >= 0) out << s.cluster;
    out << '\n';
  }
  out << report.user_id << ",user," << report.total_requests << ','
      << fixed4(report.user_total_bytes_mb) << ',' << fixed4(report.user_bandwidth_mbps) << ",\n";
  return out.str();
}

const ClusterAggregate& ComparisonTable::find(std::string_view state, int cluster) const {
  for (const ClusterAggregate& row : rows) {
    if (row.state == state && row.cluster == cluster) return row;
  }
  throw Error(ErrorKind::not_found, "comparison has no row for " + std::string(state) +
                                        " cluster " + std::to_string(cluster));
}

std::string ComparisonTable::csv() const {
  std::ostringstream out;
  out << "state,cluster,requests,bytes_mb,bandwidth_mbps,delta_bytes_mb,delta_bandwidth_mbps\n";
  for (const ClusterAggregate& row : rows) {
    out << row.state << ',';
    if (row.cluster >= 0) {
      out << row.cluster;
    } else {
      out << "user";
    }
    out << ',' << row.requests << ',' << fixed4(row.bytes_mb) << ',' << fixed4(row.bandwidth_mbps)
        << ',' << fixed4(row.delta_bytes_mb) << ',' << fixed4(row.delta_bandwidth_mbps) << '\n';
  }
  return out.str();
}

ComparisonTable compare_reports(const std::vector<ExperimentReport>& reports) {
  ComparisonTable table;
  if (reports.empty()) return table;
  for (const ExperimentReport& r : reports) {
    if (r.topology_fingerprint != reports.front().topology_fingerprint) {
      throw Error(ErrorKind::validation, "report '" + r.state + "' comes from a different topology");
    }
  }

  auto aggregate = [](const ExperimentReport& r) {
    std::map<int, ClusterAggregate> by_cluster;
    for (const ServerStats& s : r.servers) {
      if (s.cluster < 0) continue;
      ClusterAggregate& a = by_cluster[s.cluster];
      a.state = r.state;
      a.cluster = s.cluster;
      a.requests += s.requests;
      a.bytes_mb += s.bytes_mb;
      a.bandwidth_mbps += s.bandwidth_mbps;
    }
    ClusterAggregate user{r.state, -1, r.total_requests, r.user_total_bytes_mb,
                          r.user_bandwidth_mbps, 0.0, 0.0};
    by_cluster[-1] = user;
    return by_cluster;
  };

  const auto baseline = aggregate(reports.front());
  for (const ExperimentReport& r : reports) {
    auto rows = aggregate(r);
    // user row last
    std::vector<ClusterAggregate> ordered;
    for (auto& [cluster, row] : rows) {
      if (auto it = baseline.find(cluster); it != baseline.end()) {
        row.delta_bytes_mb = row.bytes_mb - it->second.bytes_mb;
        row.delta_bandwidth_mbps = row.bandwidth_mbps - it->second.bandwidth_mbps;
      }
      if (cluster >= 0) ordered.push_back(row);
    }
    ordered.push_back(rows.at(-1));
    table.rows.insert(table.rows.end(), ordered.begin(), ordered.end());
  }
  return table;
}

}  // namespace sdnlb
