#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdnlb/features.hpp"

namespace sdnlb {

enum class ClusteringMethod { kmeans, spectral };

std::string_view to_string(ClusteringMethod method);
std::optional<ClusteringMethod> parse_clustering_method(std::string_view text);

struct ClusteringConfig {
  int k = 3;
  int max_iterations = 100;
  double tolerance = 1e-9;  // stop once an iteration improves SSE by less
  std::uint64_t rng_seed = 0;
  bool normalize_features = false;  // min-max scale each feature to [0, 1]
  int restarts = 10;                // independent seeded runs, best SSE kept
};

struct Centroid {
  double mean_hops = 0.0;
  double mean_delay_ms = 0.0;

  bool operator==(const Centroid&) const = default;
};

/// Server partition. Cluster labels are canonical: clusters are numbered in
/// order of first appearance along server_ids, so the same partition always
/// carries the same labels regardless of seed.
struct ClusterModel {
  ClusteringMethod method = ClusteringMethod::kmeans;
  int requested_k = 0;
  int k = 0;
  std::vector<std::string> server_ids;
  std::vector<int> assignment;      // parallel to server_ids
  std::vector<Centroid> centroids;  // (hops, delay) units
  double sse = 0.0;                 // in the space the clustering ran in
  std::vector<int> priority_order;  // cluster indices, best first
  std::vector<double> sse_trace;    // per Lloyd iteration of the kept run
  int iterations = 0;

  int cluster_of(std::string_view server_id) const;  // throws not_found
  std::vector<std::string> members(int cluster) const;

  bool operator==(const ClusterModel&) const = default;
};

/// Clusters sorted ascending by (mean_hops, mean_delay_ms), ties by index.
std::vector<int> priority_order(const std::vector<Centroid>& centroids);

/// Coordinate-wise means of the features in each cluster.
std::vector<Centroid> feature_centroids(const FeatureSet& features,
                                        const std::vector<int>& assignment, int k);

/// Relabels clusters by first appearance and recomputes centroids/priority
/// from the features.
void canonicalize(ClusterModel& model, const FeatureSet& features);

nlohmann::ordered_json to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const nlohmann::json& document);

}  // namespace sdnlb
