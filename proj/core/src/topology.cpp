#include "sdnlb/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "sdnlb/error.hpp"

namespace sdnlb {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}

std::pair<std::string, std::string> ordered_pair(std::string_view a,
                                                 std::string_view b) {
  if (b < a) std::swap(a, b);
  return {std::string(a), std::string(b)};
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::switch_node: return "switch";
    case NodeKind::server_host: return "server_host";
    case NodeKind::user_host: return "user_host";
  }
  return "switch";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "switch") return NodeKind::switch_node;
  if (text == "server_host") return NodeKind::server_host;
  if (text == "user_host") return NodeKind::user_host;
  return std::nullopt;
}

Topology Topology::create(std::vector<Node> nodes, std::vector<Link> links,
                          std::string user_switch) {
  Topology t;
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& x, const Node& y) { return x.id < y.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (n.id.empty()) invalid("node with empty id");
    if (i > 0 && nodes[i - 1].id == n.id) invalid("duplicate node id '" + n.id + "'");
    if (n.level && *n.level < 1) {
      invalid("node '" + n.id + "' has non-positive level " + std::to_string(*n.level));
    }
    if (n.label.empty()) n.label = n.id;
    t.node_index_.emplace(n.id, i);
  }
  t.nodes_ = std::move(nodes);

  for (Link& l : links) {
    if (l.a == l.b) invalid("link '" + l.a + "'-'" + l.b + "' is a self-loop");
    for (const std::string* end : {&l.a, &l.b}) {
      if (!t.node_index_.contains(*end)) {
        invalid("link '" + l.a + "'-'" + l.b + "' references unknown node '" + *end + "'");
      }
    }
    if (!std::isfinite(l.delay_ms) || l.delay_ms < 0.0) {
      invalid("link '" + l.a + "'-'" + l.b + "' has negative or non-finite delay_ms");
    }
    if (!std::isfinite(l.capacity_mbps) || l.capacity_mbps <= 0.0) {
      invalid("link '" + l.a + "'-'" + l.b + "' has non-positive capacity_mbps");
    }
    if (l.b < l.a) std::swap(l.a, l.b);
  }
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (std::size_t i = 0; i < links.size(); ++i) {
    auto key = std::make_pair(links[i].a, links[i].b);
    if (!t.link_index_.emplace(key, i).second) {
      invalid("duplicate link '" + links[i].a + "'-'" + links[i].b + "'");
    }
  }
  t.links_ = std::move(links);

  std::vector<std::vector<std::size_t>> adjacency(t.nodes_.size());
  for (std::size_t i = 0; i < t.links_.size(); ++i) {
    const std::size_t a = t.node_index_.find(t.links_[i].a)->second;
    const std::size_t b = t.node_index_.find(t.links_[i].b)->second;
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    const Node& n = t.nodes_[i];
    if (n.kind == NodeKind::switch_node) continue;
    if (adjacency[i].size() != 1) {
      invalid("host '" + n.id + "' must have exactly one link, has " +
              std::to_string(adjacency[i].size()));
    }
    const Node& peer = t.nodes_[adjacency[i].front()];
    if (peer.kind != NodeKind::switch_node) {
      invalid("host '" + n.id + "' is attached to non-switch '" + peer.id + "'");
    }
    t.host_link_.emplace(n.id, t.link_index_.at(ordered_pair(n.id, peer.id)));
  }

  auto us = t.node_index_.find(user_switch);
  if (user_switch.empty() || us == t.node_index_.end()) {
    invalid("user_switch '" + user_switch + "' is missing from nodes");
  }
  if (t.nodes_[us->second].kind != NodeKind::switch_node) {
    invalid("user_switch '" + user_switch + "' is not a switch");
  }
  t.user_switch_ = std::move(user_switch);

  std::vector<bool> seen(t.nodes_.size(), false);
  std::queue<std::size_t> frontier;
  seen[us->second] = true;
  frontier.push(us->second);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      invalid("topology is disconnected: node '" + t.nodes_[i].id +
              "' is unreachable from user_switch '" + t.user_switch_ + "'");
    }
  }
  return t;
}

const Node* Topology::find(std::string_view id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const Node& Topology::node(std::string_view id) const {
  if (const Node* n = find(id)) return *n;
  throw Error(ErrorKind::not_found, "unknown node '" + std::string(id) + "'");
}

namespace {

std::vector<std::string> ids_of(const std::vector<Node>& nodes, NodeKind kind) {
  std::vector<std::string> out;
  for (const Node& n : nodes) {
    if (n.kind == kind) out.push_back(n.id);
  }
  return out;
}

}  // namespace

std::vector<std::string> Topology::switch_ids() const {
  return ids_of(nodes_, NodeKind::switch_node);
}

std::vector<std::string> Topology::server_ids() const {
  return ids_of(nodes_, NodeKind::server_host);
}

std::vector<std::string> Topology::user_host_ids() const {
  return ids_of(nodes_, NodeKind::user_host);
}

const Link& Topology::host_link(std::string_view host) const {
  auto it = host_link_.find(host);
  if (it == host_link_.end()) {
    throw Error(ErrorKind::not_found, "'" + std::string(host) + "' is not a host");
  }
  return links_[it->second];
}

const std::string& Topology::attached_switch(std::string_view host) const {
  const Link& l = host_link(host);
  return l.a == host ? l.b : l.a;
}

std::optional<std::size_t> Topology::link_index(std::string_view a,
                                                std::string_view b) const {
  auto it = link_index_.find(ordered_pair(a, b));
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

Topology build_paper_topology(const DelayProfile& profile, double capacity_mbps) {
  for (double d : profile.tier_ms) {
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorKind::invalid_argument, "delay profile has a negative tier delay");
    }
  }
  if (!std::isfinite(profile.host_ms) || profile.host_ms < 0.0) {
    throw Error(ErrorKind::invalid_argument, "delay profile has a negative host delay");
  }
  if (!std::isfinite(capacity_mbps) || capacity_mbps <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "capacity_mbps must be positive");
  }

  std::vector<Node> nodes;
  std::vector<Link> links;
  auto add_switch = [&](int index, int level) {
    const std::string id = "s" + std::to_string(index);
    nodes.push_back({id, NodeKind::switch_node, level, id});
    return id;
  };
  auto add_host = [&](const std::string& id, NodeKind kind, int level,
                      const std::string& sw) {
    nodes.push_back({id, kind, level, id});
    links.push_back({id, sw, profile.host_ms, capacity_mbps});
  };

  // levels[l] holds the switch ids of level l + 1.
  std::vector<std::vector<std::string>> levels(4);
  levels[0].push_back(add_switch(1, 1));
  add_host("u1", NodeKind::user_host, 1, levels[0][0]);

  int next_switch = 2;
  int next_server = 1;
  for (int level = 2; level <= 4; ++level) {
    for (int servers_on_switch : {1, 2}) {
      const std::string sw = add_switch(next_switch++, level);
      levels[level - 1].push_back(sw);
      for (int s = 0; s < servers_on_switch; ++s) {
        add_host("h" + std::to_string(next_server++), NodeKind::server_host, level, sw);
      }
    }
  }
  for (std::size_t tier = 0; tier + 1 < levels.size(); ++tier) {
    for (const std::string& upper : levels[tier]) {
      for (const std::string& lower : levels[tier + 1]) {
        links.push_back({upper, lower, profile.tier_ms[tier], capacity_mbps});
      }
    }
  }
  return Topology::create(std::move(nodes), std::move(links), levels[0][0]);
}

namespace {

template <typename T>
T required(const nlohmann::json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    invalid(where + " is missing required field '" + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid(where + " field '" + key + "' has the wrong type");
  }
}

}  // namespace

Topology load_topology(const nlohmann::json& document) {
  if (!document.is_object()) invalid("topology document must be an object");
  if (!document.contains("nodes") || !document["nodes"].is_array()) {
    invalid("topology document requires a 'nodes' array");
  }
  if (!document.contains("links") || !document["links"].is_array()) {
    invalid("topology document requires a 'links' array");
  }

  std::vector<Node> nodes;
  std::size_t position = 0;
  for (const auto& entry : document["nodes"]) {
    const std::string where = "nodes[" + std::to_string(position++) + "]";
    Node n;
    n.id = required<std::string>(entry, "id", where);
    const auto kind_text = required<std::string>(entry, "kind", where);
    const auto kind = parse_node_kind(kind_text);
    if (!kind) invalid(where + " ('" + n.id + "') has unknown kind '" + kind_text + "'");
    n.kind = *kind;
    if (entry.contains("level") && !entry["level"].is_null()) {
      n.level = required<int>(entry, "level", where);
    }
    if (entry.contains("label")) n.label = required<std::string>(entry, "label", where);
    nodes.push_back(std::move(n));
  }

  std::vector<Link> links;
  position = 0;
  for (const auto& entry : document["links"]) {
    const std::string where = "links[" + std::to_string(position++) + "]";
    Link l;
    l.a = required<std::string>(entry, "a", where);
    l.b = required<std::string>(entry, "b", where);
    l.delay_ms = required<double>(entry, "delay_ms", where);
    if (entry.contains("capacity_mbps")) {
      l.capacity_mbps = required<double>(entry, "capacity_mbps", where);
    }
    links.push_back(std::move(l));
  }

  return Topology::create(std::move(nodes), std::move(links),
                          required<std::string>(document, "user_switch", "topology document"));
}

Topology parse_topology(std::string_view text) {
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(std::string("topology document is not valid JSON: ") + e.what());
  }
  return load_topology(document);
}

nlohmann::ordered_json topology_document(const Topology& topology) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : topology.nodes()) {
    nlohmann::ordered_json entry;
    entry["id"] = n.id;
    entry["kind"] = std::string(to_string(n.kind));
    if (n.level) entry["level"] = *n.level;
    entry["label"] = n.label;
    doc["nodes"].push_back(std::move(entry));
  }
  doc["links"] = nlohmann::ordered_json::array();
  for (const Link& l : topology.links()) {
    nlohmann::ordered_json entry;
    entry["a"] = l.a;
    entry["b"] = l.b;
    entry["delay_ms"] = l.delay_ms;
    entry["capacity_mbps"] = l.capacity_mbps;
    doc["links"].push_back(std::move(entry));
  }
  doc["user_switch"] = topology.user_switch();
  return doc;
}

std::uint64_t fingerprint(const Topology& topology) {
  const std::string text = topology_document(topology).dump();
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace sdnlb
