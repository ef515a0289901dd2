#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sdnlb {

enum class NodeKind { switch_node, server_host, user_host };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::switch_node;
  std::optional<int> level;  // tier, 1 = user side
  std::string label;         // display name; defaults to id

  bool operator==(const Node&) const = default;
};

/// Undirected link. After Topology::create the endpoints are stored with
/// a < b.
struct Link {
  std::string a;
  std::string b;
  double delay_ms = 0.0;
  double capacity_mbps = 100.0;

  bool operator==(const Link&) const = default;
};

/// Validated, immutable data-plane graph. Nodes are kept sorted by id and
/// links sorted by (a, b), so two topologies describing the same graph
/// compare equal and iterate in the same order.
class Topology {
 public:
  /// Checks every structural invariant and throws Error(validation) naming
  /// the offending element on failure.
  static Topology create(std::vector<Node> nodes, std::vector<Link> links,
                         std::string user_switch);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  const std::string& user_switch() const noexcept { return user_switch_; }

  const Node* find(std::string_view id) const;
  const Node& node(std::string_view id) const;  // throws Error(not_found)

  std::vector<std::string> switch_ids() const;
  std::vector<std::string> server_ids() const;
  std::vector<std::string> user_host_ids() const;

  /// The switch a host hangs off, and the link that attaches it.
  const std::string& attached_switch(std::string_view host) const;
  const Link& host_link(std::string_view host) const;

  std::optional<std::size_t> link_index(std::string_view a,
                                        std::string_view b) const;

  bool operator==(const Topology& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_ &&
           user_switch_ == other.user_switch_;
  }

 private:
  Topology() = default;

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::string user_switch_;
  std::map<std::string, std::size_t, std::less<>> node_index_;
  std::map<std::pair<std::string, std::string>, std::size_t> link_index_;
  std::map<std::string, std::size_t, std::less<>> host_link_;
};

/// Per-tier link delays for the 4-level evaluation topology. tier_ms[0] is
/// level 1 -> 2, tier_ms[1] level 2 -> 3, tier_ms[2] level 3 -> 4. The
/// defaults put the user -> level-2/3/4 path delays at 12, 22 and 30.33 ms.
struct DelayProfile {
  std::array<double, 3> tier_ms{12.0, 10.0, 8.33};
  double host_ms = 0.0;
};

inline constexpr double kDefaultCapacityMbps = 100.0;

/// Four levels, every switch linked to every switch of the next level.
/// Level 1: user switch s1 with user host u1. Levels 2..4: one switch with
/// one server and one switch with two servers, servers h1..h9.
Topology build_paper_topology(const DelayProfile& profile = {},
                              double capacity_mbps = kDefaultCapacityMbps);

/// Document schema:
///   { "nodes": [{"id", "kind", "level"?, "label"?}],
///     "links": [{"a", "b", "delay_ms", "capacity_mbps"?}],
///     "user_switch": "<id>" }
Topology load_topology(const nlohmann::json& document);
Topology parse_topology(std::string_view text);
nlohmann::ordered_json topology_document(const Topology& topology);

/// FNV-1a over the canonical document text; stable across platforms.
std::uint64_t fingerprint(const Topology& topology);

}  // namespace sdnlb
