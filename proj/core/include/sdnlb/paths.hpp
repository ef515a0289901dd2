#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdnlb/topology.hpp"

namespace sdnlb {

/// All-pairs shortest paths over the switches of a topology. Matrices are
/// indexed by position in switch_ids() (sorted by id).
class PathMatrix {
 public:
  static constexpr int kUnreachable = -1;

  PathMatrix() = default;
  explicit PathMatrix(std::vector<std::string> switch_ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& switch_ids() const noexcept { return ids_; }
  std::size_t index_of(std::string_view switch_id) const;  // throws not_found

  int hops(std::size_t i, std::size_t j) const { return hops_[i * size() + j]; }
  double delay_ms(std::size_t i, std::size_t j) const { return delay_[i * size() + j]; }
  std::optional<std::size_t> next_hop(std::size_t i, std::size_t j) const {
    const auto v = next_[i * size() + j];
    if (v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  }

  /// Switch indices from i to j inclusive, following next_hop.
  std::vector<std::size_t> path(std::size_t i, std::size_t j) const;
  std::vector<std::string> path(std::string_view from, std::string_view to) const;

  int& hops_at(std::size_t i, std::size_t j) { return hops_[i * size() + j]; }
  double& delay_at(std::size_t i, std::size_t j) { return delay_[i * size() + j]; }
  long& next_at(std::size_t i, std::size_t j) { return next_[i * size() + j]; }

 private:
  std::vector<std::string> ids_;
  std::vector<int> hops_;
  std::vector<double> delay_;
  std::vector<long> next_;
};

/// Floyd-Warshall over switches only; hosts collapse onto their switch.
/// Paths are ordered by hop count, then accumulated delay. Remaining ties
/// keep the route through the lowest-index intermediate switch, since
/// relaxation only replaces on strict improvement and intermediates are
/// visited in ascending id order.
PathMatrix all_pairs_shortest_paths(const Topology& topology);

}  // namespace sdnlb
