#include "sdnlb/allocator.hpp"

#include <algorithm>
#include <set>

#include "sdnlb/error.hpp"

namespace sdnlb {

PoolSet::PoolSet(std::vector<Pool> pools) : pools_(std::move(pools)) {
  std::set<std::string, std::less<>> seen;
  std::set<int> clusters;
  for (const Pool& p : pools_) {
    if (p.members.empty()) {
      throw Error(ErrorKind::validation, "pool " + std::to_string(p.cluster_index) + " has no members");
    }
    if (!clusters.insert(p.cluster_index).second) {
      throw Error(ErrorKind::validation, "duplicate pool for cluster " + std::to_string(p.cluster_index));
    }
    if (p.cursor >= p.members.size()) {
      throw Error(ErrorKind::validation, "pool " + std::to_string(p.cluster_index) + " cursor out of range");
    }
    for (const std::string& m : p.members) {
      if (!seen.insert(m).second) {
        throw Error(ErrorKind::validation, "server '" + m + "' appears in more than one pool slot");
      }
    }
  }
}

const Pool& PoolSet::pool(int cluster_index) const {
  return pools_[rank_of(cluster_index)];
}

std::size_t PoolSet::rank_of(int cluster_index) const {
  for (std::size_t i = 0; i < pools_.size(); ++i) {
    if (pools_[i].cluster_index == cluster_index) return i;
  }
  throw Error(ErrorKind::not_found, "unknown cluster index " + std::to_string(cluster_index));
}

int PoolSet::cluster_of(std::string_view server_id) const {
  for (const Pool& p : pools_) {
    if (std::find(p.members.begin(), p.members.end(), server_id) != p.members.end()) {
      return p.cluster_index;
    }
  }
  throw Error(ErrorKind::not_found, "server '" + std::string(server_id) + "' is not in any pool");
}

std::vector<std::string> PoolSet::servers() const {
  std::vector<std::string> out;
  for (const Pool& p : pools_) out.insert(out.end(), p.members.begin(), p.members.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string PoolSet::assign(int cluster_index) {
  Pool& p = pools_[rank_of(cluster_index)];
  std::string chosen = p.members[p.cursor];
  p.cursor = (p.cursor + 1) % p.members.size();
  return chosen;
}

PoolSet build_pools(const ClusterModel& model, const FeatureSet& features) {
  std::vector<Pool> by_cluster(static_cast<std::size_t>(model.k));
  for (std::size_t c = 0; c < by_cluster.size(); ++c) {
    by_cluster[c].cluster_index = static_cast<int>(c);
    if (c < model.centroids.size()) by_cluster[c].centroid = model.centroids[c];
  }
  for (const std::string& server : features.server_ids) {
    int cluster = -1;
    for (std::size_t i = 0; i < model.server_ids.size(); ++i) {
      if (model.server_ids[i] == server) cluster = model.assignment[i];
    }
    if (cluster < 0 || cluster >= model.k) {
      throw Error(ErrorKind::validation, "server '" + server + "' is missing from the cluster assignment");
    }
    by_cluster[static_cast<std::size_t>(cluster)].members.push_back(server);
  }
  std::vector<Pool> ordered;
  for (int c : model.priority_order) {
    Pool& p = by_cluster[static_cast<std::size_t>(c)];
    std::sort(p.members.begin(), p.members.end());
    ordered.push_back(std::move(p));
  }
  return PoolSet(std::move(ordered));
}

PoolSet single_pool(std::vector<std::string> servers) {
  std::sort(servers.begin(), servers.end());
  Pool p;
  p.members = std::move(servers);
  return PoolSet({std::move(p)});
}

std::vector<std::string> dispatch_requests(PoolSet& pools, std::int64_t total,
                                           const RequestSplit& split) {
  if (total < 0) throw Error(ErrorKind::invalid_argument, "request count must be non-negative");
  std::vector<std::string> sequence;
  sequence.reserve(static_cast<std::size_t>(total));

  if (const auto* single = std::get_if<SingleServer>(&split)) {
    pools.cluster_of(single->server_id);  // validates the target
    sequence.assign(static_cast<std::size_t>(total), single->server_id);
  } else if (const auto* cluster = std::get_if<SingleCluster>(&split)) {
    pools.pool(cluster->cluster_index);
    for (std::int64_t i = 0; i < total; ++i) sequence.push_back(pools.assign(cluster->cluster_index));
  } else {
    if (pools.empty()) throw Error(ErrorKind::precondition, "no pools to dispatch to");
    const auto k = static_cast<std::int64_t>(pools.size());
    const std::int64_t base = total / k;
    const std::int64_t remainder = total % k;
    std::vector<int> order;
    for (const Pool& p : pools.pools()) order.push_back(p.cluster_index);
    for (std::int64_t rank = 0; rank < k; ++rank) {
      const std::int64_t quota = base + (rank < remainder ? 1 : 0);
      for (std::int64_t i = 0; i < quota; ++i) {
        sequence.push_back(pools.assign(order[static_cast<std::size_t>(rank)]));
      }
    }
  }
  return sequence;
}

std::map<std::string, std::int64_t> distribute_requests(PoolSet& pools, std::int64_t total,
                                                        const RequestSplit& split) {
  std::map<std::string, std::int64_t> counts;
  for (const std::string& s : pools.servers()) counts[s] = 0;
  for (const std::string& s : dispatch_requests(pools, total, split)) ++counts[s];
  return counts;
}

Rational avg_load_largest_cluster(std::int64_t requests, int k, int n_servers) {
  if (k < 1 || k > n_servers) {
    throw Error(ErrorKind::invalid_argument, "k = " + std::to_string(k) + " must lie in [1, " +
                                                 std::to_string(n_servers) + "]");
  }
  if (requests < 0) throw Error(ErrorKind::invalid_argument, "request count must be non-negative");
  const std::int64_t largest = n_servers - k + 1;
  return Rational(requests, static_cast<std::int64_t>(k) * largest);
}

LoadSummary load_summary(int n_servers, int k, std::int64_t requests) {
  LoadSummary row;
  row.n_servers = n_servers;
  row.k = k;
  row.requests = requests;
  row.avg_load_largest_cluster = avg_load_largest_cluster(requests, k, n_servers);
  row.avg_servers_per_cluster = Rational(n_servers, k);
  row.capacity_multiplier_pct = 100 * k;
  return row;
}

std::vector<LoadSummary> table1(int n_servers, std::int64_t requests, int k_first, int k_last) {
  if (k_first < 1 || k_last > n_servers || k_first > k_last) {
    throw Error(ErrorKind::invalid_argument, "k range must lie within [1, " +
                                                 std::to_string(n_servers) + "]");
  }
  std::vector<LoadSummary> rows;
  for (int k = k_first; k <= k_last; ++k) rows.push_back(load_summary(n_servers, k, requests));
  return rows;
}

bool matches_printed(const Rational& value, std::string_view printed) {
  if (value < 0) return false;
  std::int64_t digits = 0;
  std::int64_t scale = 1;
  bool after_point = false;
  if (printed.empty()) return false;
  for (char ch : printed) {
    if (ch == '.') {
      if (after_point) return false;
      after_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') return false;
    digits = digits * 10 + (ch - '0');
    if (after_point) scale *= 10;
  }
  return (value.numerator() * scale) / value.denominator() == digits;
}

std::string truncate_decimal(const Rational& value, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = value < 0;
  const std::int64_t scaled = (boost::abs(value).numerator() * scale) / value.denominator();
  std::string whole = std::to_string(scaled / scale);
  if (decimals <= 0) return negative ? "-" + whole : whole;
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = negative ? "-" + whole : whole;
  if (!frac.empty()) out += "." + frac;
  return out;
}

nlohmann::ordered_json export_pools(const PoolSet& pools, const Topology* topology) {
  nlohmann::ordered_json doc;
  doc["pools"] = nlohmann::ordered_json::array();
  std::size_t rank = 1;
  for (const Pool& p : pools.pools()) {
    nlohmann::ordered_json entry;
    entry["pool_id"] = "pool-" + std::to_string(p.cluster_index);
    entry["vip_label"] = "cluster-" + std::to_string(rank++);
    entry["members"] = nlohmann::ordered_json::array();
    for (const std::string& m : p.members) {
      const Node* node = topology ? topology->find(m) : nullptr;
      entry["members"].push_back(
          {{"server_id", m}, {"address_label", node && !node->label.empty() ? node->label : m}});
    }
    entry["policy"] = "round-robin";
    doc["pools"].push_back(std::move(entry));
  }
  return doc;
}

}  // namespace sdnlb
