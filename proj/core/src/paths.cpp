#include "sdnlb/paths.hpp"

#include <algorithm>

#include "sdnlb/error.hpp"

namespace sdnlb {

PathMatrix::PathMatrix(std::vector<std::string> switch_ids)
    : ids_(std::move(switch_ids)),
      hops_(ids_.size() * ids_.size(), kUnreachable),
      delay_(ids_.size() * ids_.size(), 0.0),
      next_(ids_.size() * ids_.size(), -1) {
  for (std::size_t i = 0; i < ids_.size(); ++i) hops_at(i, i) = 0;
}

std::size_t PathMatrix::index_of(std::string_view switch_id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), switch_id);
  if (it == ids_.end() || *it != switch_id) {
    throw Error(ErrorKind::not_found, "unknown switch '" + std::string(switch_id) + "'");
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<std::size_t> PathMatrix::path(std::size_t i, std::size_t j) const {
  std::vector<std::size_t> out{i};
  if (hops(i, j) == kUnreachable) return {};
  while (i != j) {
    i = *next_hop(i, j);
    out.push_back(i);
  }
  return out;
}

std::vector<std::string> PathMatrix::path(std::string_view from, std::string_view to) const {
  std::vector<std::string> out;
  for (std::size_t v : path(index_of(from), index_of(to))) out.push_back(ids_[v]);
  return out;
}

PathMatrix all_pairs_shortest_paths(const Topology& topology) {
  PathMatrix pm(topology.switch_ids());
  const std::size_t n = pm.size();

  for (const Link& l : topology.links()) {
    if (topology.node(l.a).kind != NodeKind::switch_node ||
        topology.node(l.b).kind != NodeKind::switch_node) {
      continue;
    }
    const std::size_t a = pm.index_of(l.a);
    const std::size_t b = pm.index_of(l.b);
    pm.hops_at(a, b) = pm.hops_at(b, a) = 1;
    pm.delay_at(a, b) = pm.delay_at(b, a) = l.delay_ms;
    pm.next_at(a, b) = static_cast<long>(b);
    pm.next_at(b, a) = static_cast<long>(a);
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || pm.hops(i, k) == PathMatrix::kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k || j == i || pm.hops(k, j) == PathMatrix::kUnreachable) continue;
        const int hops = pm.hops(i, k) + pm.hops(k, j);
        const double delay = pm.delay_ms(i, k) + pm.delay_ms(k, j);
        const int current = pm.hops(i, j);
        const bool better =
            current == PathMatrix::kUnreachable || hops < current ||
            (hops == current && delay < pm.delay_ms(i, j));
        if (better) {
          pm.hops_at(i, j) = hops;
          pm.delay_at(i, j) = delay;
          pm.next_at(i, j) = pm.next_at(i, k);
        }
      }
    }
  }
  return pm;
}

}  // namespace sdnlb
