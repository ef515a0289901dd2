#include "sdnlb/features.hpp"

namespace sdnlb {

FeatureSet server_features(const Topology& topology, const PathMatrix& paths) {
  FeatureSet out;
  const std::size_t user = paths.index_of(topology.user_switch());
  for (const std::string& server : topology.server_ids()) {
    const std::size_t sw = paths.index_of(topology.attached_switch(server));
    out.points.push_back({paths.hops(user, sw), paths.delay_ms(user, sw)});
    out.server_ids.push_back(server);
  }
  return out;
}

}  // namespace sdnlb
