#include <cmath>

#include "sdnlb/error.hpp"
#include "sdnlb/simulator.hpp"

namespace sdnlb {

std::vector<double> solve_max_min(const FairShareProblem& problem) {
  const std::size_t n_flows = problem.flow_links.size();
  const std::size_t n_links = problem.link_capacity.size();
  auto cap_of = [&](std::size_t f) {
    return f < problem.flow_cap.size() ? problem.flow_cap[f] : kUncapped;
  };

  std::vector<double> residual = problem.link_capacity;
  std::vector<std::size_t> active(n_links, 0);
  std::vector<std::vector<std::size_t>> flows_on(n_links);
  for (std::size_t f = 0; f < n_flows; ++f) {
    if (problem.flow_links[f].empty() && !std::isfinite(cap_of(f))) {
      throw Error(ErrorKind::invalid_argument,
                  "flow " + std::to_string(f) + " crosses no links and has no rate ceiling");
    }
    for (std::size_t e : problem.flow_links[f]) {
      if (e >= n_links) {
        throw Error(ErrorKind::invalid_argument, "flow " + std::to_string(f) + " names unknown link");
      }
      ++active[e];
      flows_on[e].push_back(f);
    }
  }

  std::vector<double> rate(n_flows, 0.0);
  std::vector<bool> frozen(n_flows, false);
  std::size_t remaining = n_flows;

  auto freeze = [&](std::size_t f, double value) {
    frozen[f] = true;
    rate[f] = value;
    --remaining;
    for (std::size_t e : problem.flow_links[f]) {
      residual[e] -= value;
      --active[e];
    }
  };

  while (remaining > 0) {
    double link_level = kUncapped;
    std::size_t bottleneck = n_links;
    for (std::size_t e = 0; e < n_links; ++e) {
      if (active[e] == 0) continue;
      const double share = std::max(0.0, residual[e]) / static_cast<double>(active[e]);
      if (share < link_level) {
        link_level = share;
        bottleneck = e;
      }
    }
    double cap_level = kUncapped;
    for (std::size_t f = 0; f < n_flows; ++f) {
      if (!frozen[f]) cap_level = std::min(cap_level, cap_of(f));
    }

    if (cap_level <= link_level) {
      for (std::size_t f = 0; f < n_flows; ++f) {
        if (!frozen[f] && cap_of(f) == cap_level) freeze(f, cap_level);
      }
    } else {
      for (std::size_t f : flows_on[bottleneck]) {
        if (!frozen[f]) freeze(f, link_level);
      }
    }
  }
  return rate;
}

}  // namespace sdnlb
