#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "sdnlb/cluster_model.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb {

using Rational = boost::rational<std::int64_t>;

struct Pool {
  int cluster_index = 0;
  std::vector<std::string> members;  // sorted by server id
  std::size_t cursor = 0;            // next round-robin target
  Centroid centroid;
};

/// Round-robin pools in priority order. Mutation (assign) is not
/// synchronized; callers serialize dispatch.
class PoolSet {
 public:
  PoolSet() = default;
  explicit PoolSet(std::vector<Pool> pools);

  const std::vector<Pool>& pools() const noexcept { return pools_; }
  std::size_t size() const noexcept { return pools_.size(); }
  bool empty() const noexcept { return pools_.empty(); }

  const Pool& pool(int cluster_index) const;  // throws not_found
  std::size_t rank_of(int cluster_index) const;
  int cluster_of(std::string_view server_id) const;  // throws not_found
  std::vector<std::string> servers() const;          // sorted

  /// members[cursor], then advances the cursor.
  std::string assign(int cluster_index);

  /// With one dataset replicated across each pool's members, the network
  /// holds one distinct dataset per pool.
  std::size_t distinct_dataset_capacity() const noexcept { return pools_.size(); }

 private:
  std::vector<Pool> pools_;
};

PoolSet build_pools(const ClusterModel& model, const FeatureSet& features);
PoolSet single_pool(std::vector<std::string> servers);

inline std::string assign_request(PoolSet& pools, int cluster_index) {
  return pools.assign(cluster_index);
}

struct EqualPerCluster {};
struct SingleCluster {
  int cluster_index = 0;
};
struct SingleServer {
  std::string server_id;
};
using RequestSplit = std::variant<EqualPerCluster, SingleCluster, SingleServer>;

/// The server chosen for each of `total` requests, in dispatch order.
/// EqualPerCluster gives every pool floor(R/k) requests and hands the
/// remainder out one each starting from the highest-priority pool; pools
/// are served in priority order.
std::vector<std::string> dispatch_requests(PoolSet& pools, std::int64_t total,
                                           const RequestSplit& split);

/// Per-server request counts (every pooled server present, zeros included).
std::map<std::string, std::int64_t> distribute_requests(PoolSet& pools, std::int64_t total,
                                                        const RequestSplit& split);

struct LoadSummary {
  int n_servers = 0;
  int k = 0;
  std::int64_t requests = 0;
  Rational avg_servers_per_cluster;
  int capacity_multiplier_pct = 0;
  Rational avg_load_largest_cluster;
};

/// A = R / (k * (n - k + 1)): with k clusters over n servers the largest
/// possible cluster keeps n - k + 1 servers (every other cluster holds one),
/// and it receives 1/k of the requests.
Rational avg_load_largest_cluster(std::int64_t requests, int k, int n_servers);

LoadSummary load_summary(int n_servers, int k, std::int64_t requests);
std::vector<LoadSummary> table1(int n_servers, std::int64_t requests, int k_first, int k_last);

/// True when `printed` equals `value` truncated to printed's decimal places
/// ("1.428" matches 10/7; "3.33" matches 10/3).
bool matches_printed(const Rational& value, std::string_view printed);

/// Decimal text truncated to `decimals` places, trailing zeros dropped.
std::string truncate_decimal(const Rational& value, int decimals);

/// Load-balancer pool payload:
///   {"pools": [{"pool_id", "vip_label", "members": [{"server_id",
///   "address_label"}], "policy": "round-robin"}]}
/// Address labels come from the topology node labels when one is given.
nlohmann::ordered_json export_pools(const PoolSet& pools, const Topology* topology = nullptr);

}  // namespace sdnlb
