#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdnlb/cluster_model.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/linalg.hpp"

namespace sdnlb {

/// Points are the rows of a Matrix; columns are dimensions.
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Fewer points than requested clusters means one cluster per point.
int effective_k(int requested_k, int n_points);

Matrix feature_matrix(const FeatureSet& features);

/// Scales every column to [0, 1]; constant columns map to 0.
Matrix min_max_normalize(const Matrix& points);

/// k-means++ seeding: the first center is uniform over the points, each
/// further center is drawn with probability proportional to its squared
/// distance from the nearest chosen center. If every remaining point
/// coincides with a chosen center, the next one is drawn uniformly from the
/// points not chosen yet. Returns row indices into `points`.
std::vector<std::size_t> kmeanspp_seed_indices(const Matrix& points, int k,
                                               std::uint64_t rng_seed);
Matrix kmeanspp_seed(const Matrix& points, int k, std::uint64_t rng_seed);
Matrix kmeanspp_seed(const FeatureSet& features, int k, std::uint64_t rng_seed);

struct LloydResult {
  std::vector<int> assignment;
  Matrix centroids;
  double sse = 0.0;
  std::vector<double> sse_trace;
  int iterations = 0;
};

/// Lloyd refinement from the given centroids. Stops when the assignment no
/// longer changes, when an iteration improves SSE by less than `tolerance`,
/// or after `max_iterations`. Nearest-centroid ties go to the lower cluster
/// index. A cluster left empty takes over the point farthest from its own
/// centroid (among clusters that can spare one).
LloydResult lloyd(const Matrix& points, Matrix initial_centroids, int max_iterations,
                  double tolerance);

/// Seeding + Lloyd, repeated config.restarts times with seeds drawn from a
/// SplitMix64 stream started at config.rng_seed. Lowest SSE wins; ties go to
/// the earliest restart. config.k must already be <= point count.
LloydResult best_kmeans_run(const Matrix& points, const ClusteringConfig& config);

ClusterModel lloyd(const FeatureSet& features, const Matrix& initial_centroids,
                   const ClusteringConfig& config);

/// effective_k, optional min-max scaling, restarts of k-means++ and Lloyd.
/// Centroids are reported in (hops, delay) units.
ClusterModel kmeans_cluster(const FeatureSet& features, const ClusteringConfig& config);

/// Exact minimum SSE over all partitions of the points into exactly k
/// non-empty clusters. Limited to 10 points.
double brute_force_kmeans(const Matrix& points, int k);
double brute_force_kmeans(const FeatureSet& features, int k);

}  // namespace sdnlb
