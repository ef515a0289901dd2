#include "sdnlb/cluster_model.hpp"

#include <algorithm>
#include <numeric>

#include "sdnlb/error.hpp"

namespace sdnlb {

std::string_view to_string(ClusteringMethod method) {
  return method == ClusteringMethod::spectral ? "spectral" : "kmeans";
}

std::optional<ClusteringMethod> parse_clustering_method(std::string_view text) {
  if (text == "kmeans") return ClusteringMethod::kmeans;
  if (text == "spectral") return ClusteringMethod::spectral;
  return std::nullopt;
}

int ClusterModel::cluster_of(std::string_view server_id) const {
  for (std::size_t i = 0; i < server_ids.size(); ++i) {
    if (server_ids[i] == server_id) return assignment[i];
  }
  throw Error(ErrorKind::not_found,
              "server '" + std::string(server_id) + "' is not in the cluster model");
}

std::vector<std::string> ClusterModel::members(int cluster) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < server_ids.size(); ++i) {
    if (assignment[i] == cluster) out.push_back(server_ids[i]);
  }
  return out;
}

std::vector<int> priority_order(const std::vector<Centroid>& centroids) {
  std::vector<int> order(centroids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Centroid& x = centroids[static_cast<std::size_t>(a)];
    const Centroid& y = centroids[static_cast<std::size_t>(b)];
    if (x.mean_hops != y.mean_hops) return x.mean_hops < y.mean_hops;
    return x.mean_delay_ms < y.mean_delay_ms;
  });
  return order;
}

std::vector<Centroid> feature_centroids(const FeatureSet& features,
                                        const std::vector<int>& assignment, int k) {
  std::vector<Centroid> sums(static_cast<std::size_t>(k));
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto c = static_cast<std::size_t>(assignment[i]);
    sums[c].mean_hops += features.points[i].hops;
    sums[c].mean_delay_ms += features.points[i].delay_ms;
    ++counts[c];
  }
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (counts[c] == 0) continue;
    sums[c].mean_hops /= static_cast<double>(counts[c]);
    sums[c].mean_delay_ms /= static_cast<double>(counts[c]);
  }
  return sums;
}

void canonicalize(ClusterModel& model, const FeatureSet& features) {
  std::vector<int> relabel(static_cast<std::size_t>(model.k), -1);
  int next = 0;
  for (int& label : model.assignment) {
    auto& mapped = relabel[static_cast<std::size_t>(label)];
    if (mapped < 0) mapped = next++;
    label = mapped;
  }
  model.centroids = feature_centroids(features, model.assignment, model.k);
  model.priority_order = priority_order(model.centroids);
}

nlohmann::ordered_json to_json(const ClusterModel& model) {
  nlohmann::ordered_json doc;
  doc["method"] = std::string(to_string(model.method));
  doc["requested_k"] = model.requested_k;
  doc["k"] = model.k;
  doc["sse"] = model.sse;
  doc["iterations"] = model.iterations;
  doc["priority_order"] = model.priority_order;
  doc["centroids"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < model.centroids.size(); ++c) {
    nlohmann::ordered_json entry;
    entry["cluster"] = c;
    entry["mean_hops"] = model.centroids[c].mean_hops;
    entry["mean_delay_ms"] = model.centroids[c].mean_delay_ms;
    entry["size"] = model.members(static_cast<int>(c)).size();
    doc["centroids"].push_back(std::move(entry));
  }
  doc["assignment"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < model.server_ids.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["server"] = model.server_ids[i];
    entry["cluster"] = model.assignment[i];
    doc["assignment"].push_back(std::move(entry));
  }
  return doc;
}

ClusterModel cluster_model_from_json(const nlohmann::json& document) {
  try {
    ClusterModel m;
    const auto method = parse_clustering_method(document.at("method").get<std::string>());
    if (!method) throw Error(ErrorKind::validation, "cluster model has unknown method");
    m.method = *method;
    m.requested_k = document.at("requested_k").get<int>();
    m.k = document.at("k").get<int>();
    m.sse = document.at("sse").get<double>();
    m.iterations = document.value("iterations", 0);
    m.priority_order = document.at("priority_order").get<std::vector<int>>();
    for (const auto& c : document.at("centroids")) {
      m.centroids.push_back({c.at("mean_hops").get<double>(), c.at("mean_delay_ms").get<double>()});
    }
    for (const auto& a : document.at("assignment")) {
      m.server_ids.push_back(a.at("server").get<std::string>());
      const int cluster = a.at("cluster").get<int>();
      if (cluster < 0 || cluster >= m.k) {
        throw Error(ErrorKind::validation, "server '" + m.server_ids.back() +
                                               "' has out-of-range cluster " +
                                               std::to_string(cluster));
      }
      m.assignment.push_back(cluster);
    }
    if (static_cast<int>(m.centroids.size()) != m.k) {
      throw Error(ErrorKind::validation, "cluster model centroid count differs from k");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::validation, std::string("malformed cluster model: ") + e.what());
  }
}

}  // namespace sdnlb
