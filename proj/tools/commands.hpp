#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdnlb/allocator.hpp"
#include "sdnlb/cluster_model.hpp"
#include "sdnlb/simulator.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb::cli {

enum class Command { cluster, table1, experiment, serve, paper_repro };

struct RunConfig {
  Command command = Command::paper_repro;
  std::optional<std::filesystem::path> topology_path;
  int k = 3;
  std::uint64_t seed = 0;
  ClusteringMethod method = ClusteringMethod::kmeans;
  std::optional<std::int64_t> requests;
  std::optional<std::int64_t> requests_per_cluster;
  std::optional<std::string> state;
  std::optional<std::string> target;
  double duration_s = 10.0;
  std::optional<std::filesystem::path> out_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  int servers = 0;  // table1 without a topology; 0 = take it from the topology
};

/// `method,cluster,priority,size,mean_hops,mean_delay_ms,members`; rows in
/// priority order, members space separated.
std::string clusters_csv(const std::vector<ClusterModel>& models);

/// One row per quantity and one column per k, laid out like the printed
/// comparison table. Decimals are truncated to three places; the exact
/// fractions follow in their own rows.
std::string table1_csv(const std::vector<LoadSummary>& rows);

/// Report CSVs of several runs, each row prefixed with the state name.
std::string experiments_csv(const std::vector<ExperimentReport>& reports);

Topology load_topology_file(const std::filesystem::path& path);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproResult {
  std::vector<Check> checks;
  bool all_passed() const;
};

/// Builds the evaluation topology, clusters it both ways, sweeps the
/// capacity/load table for n = 9, R = 30, runs the three workload states
/// and writes table1.csv, clusters.csv, experiments.csv and comparison.csv
/// into out_dir. Throws std::runtime_error when a file cannot be written.
ReproResult paper_repro(const std::filesystem::path& out_dir, std::uint64_t seed,
                        double duration_s = 10.0);

/// Entry point shared by the sdnlb binary. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace sdnlb::cli
