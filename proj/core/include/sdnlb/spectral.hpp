#pragma once

#include <span>
#include <string>
#include <vector>

#include "sdnlb/cluster_model.hpp"
#include "sdnlb/linalg.hpp"
#include "sdnlb/topology.hpp"

namespace sdnlb {

/// Binary switch adjacency: 1 iff a link joins the two switches.
struct SimilarityMatrix {
  std::vector<std::string> switch_ids;  // row/column order
  Matrix entries;
};

SimilarityMatrix similarity_matrix(const Topology& topology);

/// L = I - D^-1/2 A D^-1/2. A zero-degree vertex has no normalized
/// Laplacian; the error names it (from `names` when given).
Matrix normalized_laplacian(const Matrix& adjacency, std::span<const std::string> names = {});

/// Rows of the eigenvectors for the `dims` smallest Laplacian eigenvalues,
/// each row scaled to unit length.
Matrix spectral_embedding(const Matrix& adjacency, int dims,
                          std::span<const std::string> names = {});

/// Ng-Jordan-Weiss: embed every vertex and k-means the embedding rows.
/// Returns one cluster label per vertex.
std::vector<int> spectral_partition(const Matrix& adjacency, const ClusteringConfig& config);

/// Clusters the switch graph, then gives every server its switch's label.
/// Only server-bearing switches take part in the k-means step, with k
/// clamped to their count. Centroids are reported in (hops, delay) units.
ClusterModel spectral_cluster(const Topology& topology, const ClusteringConfig& config);

}  // namespace sdnlb
