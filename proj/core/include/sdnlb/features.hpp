#pragma once

#include <string>
#include <vector>

#include "sdnlb/paths.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb {

struct FeaturePoint {
  int hops = 0;
  double delay_ms = 0.0;

  bool operator==(const FeaturePoint&) const = default;
};

/// One (hops, delay) point per server host, parallel to server_ids.
struct FeatureSet {
  std::vector<FeaturePoint> points;
  std::vector<std::string> server_ids;

  std::size_t size() const noexcept { return points.size(); }
};

/// Distance from the user switch to each server's switch, in server-id order.
FeatureSet server_features(const Topology& topology, const PathMatrix& paths);

}  // namespace sdnlb
