#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "sdnlb/allocator.hpp"
#include "sdnlb/cluster_model.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb {

struct Response {
  int status = 200;
  std::string body;  // JSON; errors are {"error", "detail"}
};

/// In-memory pipeline state behind the HTTP endpoints:
///
///   PUT  /topology                    topology document -> {nodes, links, servers}
///   GET  /clusters?k=&method=&seed=   cluster model (also selects the active one)
///   GET  /pools                       pool export
///   POST /requests                    {"target": "auto" | index, "count"} -> assignments
///   GET  /stats                       per-server counters + load summary
///
/// Stages build on each other: pools exist only with a model, a model only
/// with a topology. Every handler runs under one mutex, so a single POST
/// dispatches its whole round-robin sequence atomically. Nothing persists
/// across restarts.
class Service {
 public:
  Response put_topology(std::string_view body);
  Response get_clusters(std::optional<std::string> k, std::optional<std::string> method,
                        std::optional<std::string> seed);
  Response get_pools();
  Response post_requests(std::string_view body);
  Response get_stats();

  /// Invariant check used by tests: pools => model => topology.
  bool stages_consistent() const;

 private:
  using CacheKey = std::tuple<std::uint64_t, int, ClusteringMethod, std::uint64_t>;

  mutable std::mutex mutex_;
  std::optional<Topology> topology_;
  std::uint64_t topology_fingerprint_ = 0;
  FeatureSet features_;
  std::optional<CacheKey> active_key_;
  std::optional<ClusterModel> model_;
  std::optional<PoolSet> pools_;
  std::map<std::string, std::int64_t> counters_;
  std::map<CacheKey, ClusterModel> cache_;
};

/// Binds a Service to cpp-httplib. Handlers translate Service responses
/// one to one.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port, or -1. Port 0 picks a free port.
  int bind(const std::string& host, int port);
  /// Blocks until stop(). Requires a successful bind().
  bool listen();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sdnlb
