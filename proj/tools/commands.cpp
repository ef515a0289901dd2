#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sdnlb/error.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/kmeans.hpp"
#include "sdnlb/paths.hpp"
#include "sdnlb/service.hpp"
#include "sdnlb/spectral.hpp"

namespace sdnlb::cli {

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

void emit(const std::optional<std::filesystem::path>& out_dir, const std::string& name,
          const std::string& text) {
  if (!out_dir) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(*out_dir);
  write_file(*out_dir / name, text);
  std::cerr << "wrote " << (*out_dir / name).string() << '\n';
}

Topology topology_for(const RunConfig& config) {
  return config.topology_path ? load_topology_file(*config.topology_path) : build_paper_topology();
}

ClusterModel cluster_with(const Topology& topology, const FeatureSet& features,
                          ClusteringMethod method, int k, std::uint64_t seed) {
  ClusteringConfig cc;
  cc.k = k;
  cc.rng_seed = seed;
  return method == ClusteringMethod::kmeans ? kmeans_cluster(features, cc)
                                            : spectral_cluster(topology, cc);
}

}  // namespace

Topology load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot read topology file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_topology(text.str());
}

std::string clusters_csv(const std::vector<ClusterModel>& models) {
  std::ostringstream out;
  out << "method,cluster,priority,size,mean_hops,mean_delay_ms,members\n";
  for (const ClusterModel& m : models) {
    int rank = 1;
    for (int c : m.priority_order) {
      const auto members = m.members(c);
      const Centroid& centroid = m.centroids[static_cast<std::size_t>(c)];
      out << to_string(m.method) << ',' << c << ',' << rank++ << ',' << members.size() << ','
          << fixed4(centroid.mean_hops) << ',' << fixed4(centroid.mean_delay_ms) << ',';
      for (std::size_t i = 0; i < members.size(); ++i) out << (i ? " " : "") << members[i];
      out << '\n';
    }
  }
  return out.str();
}

std::string table1_csv(const std::vector<LoadSummary>& rows) {
  std::ostringstream out;
  auto line = [&](const std::string& name, auto&& cell) {
    out << name;
    for (const LoadSummary& r : rows) out << ',' << cell(r);
    out << '\n';
  };
  auto fraction = [](const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  };
  line("k", [](const LoadSummary& r) { return std::to_string(r.k); });
  line("avg_servers_per_cluster",
       [](const LoadSummary& r) { return truncate_decimal(r.avg_servers_per_cluster, 3); });
  line("capacity_added_pct", [](const LoadSummary& r) { return std::to_string(r.capacity_multiplier_pct); });
  line("avg_load_largest_cluster",
       [](const LoadSummary& r) { return truncate_decimal(r.avg_load_largest_cluster, 3); });
  line("avg_servers_per_cluster_exact",
       [&](const LoadSummary& r) { return fraction(r.avg_servers_per_cluster); });
  line("avg_load_largest_cluster_exact",
       [&](const LoadSummary& r) { return fraction(r.avg_load_largest_cluster); });
  return out.str();
}

std::string experiments_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream out;
  out << "state,entity,kind,requests,bytes_mb,bandwidth_mbps,cluster\n";
  for (const ExperimentReport& r : reports) {
    std::istringstream rows(report_csv(r));
    std::string row;
    std::getline(rows, row);  // header
    while (std::getline(rows, row)) out << r.state << ',' << row << '\n';
  }
  return out.str();
}

bool ReproResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ReproResult paper_repro(const std::filesystem::path& out_dir, std::uint64_t seed, double duration_s) {
  ReproResult result;
  auto check = [&](std::string name, bool passed, std::string detail = {}) {
    result.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  const Topology topology = build_paper_topology();
  const PathMatrix paths = all_pairs_shortest_paths(topology);
  const FeatureSet features = server_features(topology, paths);
  const int n = static_cast<int>(features.size());

  // Capacity / load table.
  const auto rows = table1(n, 30, 1, n);
  const std::vector<std::string> servers_row{"9", "4.5", "3", "2.25", "1.8", "1.5", "1.28", "1.125", "1"};
  const std::vector<std::string> load_row{"3.33", "1.875", "1.428", "1.25", "1.2",
                                          "1.25", "1.428", "1.875", "3.33"};
  bool table_ok = rows.size() == load_row.size();
  for (std::size_t i = 0; table_ok && i < rows.size(); ++i) {
    table_ok = matches_printed(rows[i].avg_servers_per_cluster, servers_row[i]) &&
               rows[i].capacity_multiplier_pct == 100 * static_cast<int>(i + 1) &&
               matches_printed(rows[i].avg_load_largest_cluster, load_row[i]);
  }
  check("table1 matches printed rows", table_ok);

  // Clustering.
  const ClusterModel kmeans = cluster_with(topology, features, ClusteringMethod::kmeans, 3, seed);
  const ClusterModel spectral = cluster_with(topology, features, ClusteringMethod::spectral, 3, seed);
  {
    const double expected_hops[] = {1.0, 2.0, 3.0};
    const double expected_delay[] = {12.0, 22.0, 30.33};
    bool hops_ok = kmeans.k == 3;
    bool delay_ok = kmeans.k == 3;
    bool levels_ok = kmeans.k == 3;
    std::string detail;
    for (std::size_t rank = 0; hops_ok && rank < 3; ++rank) {
      const int c = kmeans.priority_order[rank];
      const Centroid& centroid = kmeans.centroids[static_cast<std::size_t>(c)];
      hops_ok = hops_ok && centroid.mean_hops == expected_hops[rank];
      delay_ok = delay_ok && std::abs(centroid.mean_delay_ms - expected_delay[rank]) <= 0.01;
      const auto members = kmeans.members(c);
      for (const std::string& m : members) {
        levels_ok = levels_ok && topology.node(m).level == static_cast<int>(rank) + 2;
      }
      levels_ok = levels_ok && members.size() == 3;
      detail += (rank ? " " : "") + fixed4(centroid.mean_hops) + "/" + fixed4(centroid.mean_delay_ms);
    }
    check("kmeans k=3 groups servers by level", levels_ok);
    check("kmeans k=3 centroid hops are 1, 2, 3", hops_ok, detail);
    check("kmeans k=3 centroid delays are 12, 22, 30.33 ms", delay_ok, detail);
    bool spectral_ok = spectral.k == 3 && spectral.server_ids.size() == features.size();
    for (int c = 0; spectral_ok && c < spectral.k; ++c) spectral_ok = !spectral.members(c).empty();
    check("spectral k=3 yields a 3-way partition of the servers", spectral_ok);
  }

  // Workload states.
  const PoolSet pools = build_pools(kmeans, features);
  std::vector<ExperimentReport> reports;
  for (const ExperimentState& state :
       {ExperimentState{BigClusterRoundRobin{30}}, ExperimentState{ClusteredRoundRobin{10}},
        ExperimentState{SingleServerBurst{"h3", 30}}}) {
    reports.push_back(run_experiment(Scenario{topology, pools, state, duration_s}));
  }
  {
    const ExperimentReport& big = reports[0];
    const ExperimentReport& clustered = reports[1];
    const ExperimentReport& single = reports[2];

    bool single_ok = true;
    for (const ServerStats& s : single.servers) {
      single_ok = single_ok && s.requests == (s.server_id == "h3" ? 30 : 0);
    }
    check("single-server burst puts all 30 requests on h3", single_ok);

    std::vector<std::int64_t> big_counts;
    for (const ServerStats& s : big.servers) big_counts.push_back(s.requests);
    check("big-cluster round robin gives 4,4,4,3,3,3,3,3,3",
          big_counts == std::vector<std::int64_t>{4, 4, 4, 3, 3, 3, 3, 3, 3});

    bool clustered_ok = true;
    for (const Pool& p : pools.pools()) {
      std::vector<std::int64_t> counts;
      for (const std::string& m : p.members) counts.push_back(clustered.server(m).requests);
      std::sort(counts.rbegin(), counts.rend());
      clustered_ok = clustered_ok && counts == std::vector<std::int64_t>{4, 3, 3};
    }
    check("clustered round robin gives 4,3,3 in every cluster", clustered_ok);

    const ComparisonTable comparison = compare_reports(reports);
    bool ordered = true;
    std::string detail;
    for (std::size_t rank = 0; rank < pools.size(); ++rank) {
      const double bytes = comparison.find("clustered", pools.pools()[rank].cluster_index).bytes_mb;
      detail += (rank ? " " : "") + fixed4(bytes);
      if (rank > 0) {
        const double prev =
            comparison.find("clustered", pools.pools()[rank - 1].cluster_index).bytes_mb;
        ordered = ordered && prev + 1e-9 >= bytes;
      }
    }
    check("clustered bytes: nearest >= middle >= farthest", ordered, detail);
    check("clustered user bytes >= big-cluster user bytes",
          clustered.user_total_bytes_mb + 1e-9 >= big.user_total_bytes_mb,
          fixed4(clustered.user_total_bytes_mb) + " vs " + fixed4(big.user_total_bytes_mb));

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "table1.csv", table1_csv(rows));
    write_file(out_dir / "clusters.csv", clusters_csv({kmeans, spectral}));
    write_file(out_dir / "experiments.csv", experiments_csv(reports));
    write_file(out_dir / "comparison.csv", comparison.csv());
  }
  return result;
}

namespace {

int cmd_cluster(const RunConfig& config) {
  const Topology topology = topology_for(config);
  const FeatureSet features = server_features(topology, all_pairs_shortest_paths(topology));
  const ClusterModel model = cluster_with(topology, features, config.method, config.k, config.seed);
  emit(config.out_dir, "clusters.csv", clusters_csv({model}));
  return 0;
}

int cmd_table1(const RunConfig& config) {
  int n = config.servers;
  if (n <= 0) n = static_cast<int>(topology_for(config).server_ids().size());
  if (n < 1) throw Error(ErrorKind::invalid_argument, "topology has no servers");
  emit(config.out_dir, "table1.csv", table1_csv(table1(n, config.requests.value_or(30), 1, n)));
  return 0;
}

int cmd_experiment(const RunConfig& config) {
  if (!config.state) throw CLI::ValidationError("--state", "experiment requires --state");
  ExperimentState state;
  if (*config.state == "single-server") {
    if (!config.target) throw CLI::ValidationError("--target", "single-server requires --target <server-id>");
    if (config.requests_per_cluster) {
      throw CLI::ValidationError("--requests-per-cluster", "only valid with --state clustered");
    }
    state = SingleServerBurst{*config.target, config.requests.value_or(30)};
  } else if (*config.state == "big-cluster") {
    if (config.requests_per_cluster || config.target) {
      throw CLI::ValidationError("--state", "big-cluster takes only --requests");
    }
    state = BigClusterRoundRobin{config.requests.value_or(30)};
  } else if (*config.state == "clustered") {
    if (config.requests || config.target) {
      throw CLI::ValidationError("--state", "clustered takes --requests-per-cluster, not --requests/--target");
    }
    state = ClusteredRoundRobin{config.requests_per_cluster.value_or(10)};
  } else {
    throw CLI::ValidationError("--state", "must be single-server, big-cluster or clustered");
  }

  const Topology topology = topology_for(config);
  const FeatureSet features = server_features(topology, all_pairs_shortest_paths(topology));
  const ClusterModel model = cluster_with(topology, features, config.method, config.k, config.seed);
  const ExperimentReport report =
      run_experiment(Scenario{topology, build_pools(model, features), state, config.duration_s});
  emit(config.out_dir, "experiment.csv", report_csv(report));
  return 0;
}

int cmd_serve(const RunConfig& config) {
  Service service;
  if (config.topology_path) {
    const auto doc = topology_document(load_topology_file(*config.topology_path)).dump();
    const Response r = service.put_topology(doc);
    if (r.status != 200) throw std::runtime_error(r.body);
  }
  HttpServer server(service);
  const int port = server.bind(config.host, config.port);
  if (port < 0) {
    std::cerr << "cannot bind " << config.host << ':' << config.port << '\n';
    return 3;
  }
  std::cerr << "listening on http://" << config.host << ':' << port << '\n';
  return server.listen() ? 0 : 3;
}

int cmd_paper_repro(const RunConfig& config) {
  const auto out_dir = config.out_dir.value_or("repro");
  const ReproResult result = paper_repro(out_dir, config.seed, config.duration_s);
  for (const Check& c : result.checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
    std::cout << '\n';
  }
  std::cout << "outputs in " << out_dir.string() << '\n';
  return result.all_passed() ? 0 : 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Cluster-based server pools for SDN load balancing"};
  app.require_subcommand(1);
  RunConfig config;

  std::string method = "kmeans";
  std::string topology_path;
  std::string out_dir;
  auto add_topology = [&](CLI::App* sub) {
    sub->add_option("--topology", topology_path, "Topology JSON document (default: built-in 4-level topology)");
  };
  auto add_clustering = [&](CLI::App* sub) {
    sub->add_option("--k", config.k, "Number of clusters")->check(CLI::PositiveNumber);
    sub->add_option("--method", method, "kmeans | spectral")->check(CLI::IsMember({"kmeans", "spectral"}));
    sub->add_option("--seed", config.seed, "RNG seed");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (default: stdout)");
  };

  auto* cluster = app.add_subcommand("cluster", "Cluster the servers and print the cluster table");
  add_topology(cluster);
  add_clustering(cluster);
  add_out(cluster);

  auto* table = app.add_subcommand("table1", "Capacity/load table for k = 1..n");
  add_topology(table);
  table->add_option("--requests", config.requests, "Total requests R")->check(CLI::NonNegativeNumber);
  table->add_option("--servers", config.servers, "Server count n (overrides --topology)")
      ->check(CLI::PositiveNumber);
  add_out(table);

  auto* experiment = app.add_subcommand("experiment", "Run one workload state through the simulator");
  add_topology(experiment);
  add_clustering(experiment);
  add_out(experiment);
  experiment->add_option("--state", config.state, "single-server | big-cluster | clustered");
  experiment->add_option("--target", config.target, "Server id for single-server");
  experiment->add_option("--requests", config.requests, "Requests (single-server, big-cluster)")
      ->check(CLI::NonNegativeNumber);
  experiment->add_option("--requests-per-cluster", config.requests_per_cluster,
                         "Requests per cluster (clustered)")
      ->check(CLI::NonNegativeNumber);
  experiment->add_option("--duration", config.duration_s, "Window length in seconds")
      ->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_topology(serve);
  serve->add_option("--host", config.host, "Bind address");
  serve->add_option("--port", config.port, "Bind port")->check(CLI::Range(0, 65535));

  auto* repro = app.add_subcommand("paper-repro", "Reproduce every evaluation artifact and self-check");
  repro->add_option("--seed", config.seed, "RNG seed");
  repro->add_option("--duration", config.duration_s, "Window length in seconds")->check(CLI::PositiveNumber);
  add_out(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  config.method = *parse_clustering_method(method);
  if (!topology_path.empty()) config.topology_path = topology_path;
  if (!out_dir.empty()) config.out_dir = out_dir;

  try {
    if (*cluster) return cmd_cluster(config);
    if (*table) return cmd_table1(config);
    if (*experiment) {
      try {
        return cmd_experiment(config);
      } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << experiment->help();
        return 2;
      }
    }
    if (*serve) return cmd_serve(config);
    return cmd_paper_repro(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace sdnlb::cli
