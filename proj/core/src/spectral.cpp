#include "sdnlb/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sdnlb/error.hpp"
#include "sdnlb/features.hpp"
#include "sdnlb/kmeans.hpp"
#include "sdnlb/paths.hpp"

namespace sdnlb {

SimilarityMatrix similarity_matrix(const Topology& topology) {
  SimilarityMatrix sim{topology.switch_ids(), {}};
  const std::size_t n = sim.switch_ids.size();
  sim.entries = Matrix(n, n);
  auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(sim.switch_ids.begin(), sim.switch_ids.end(), id) - sim.switch_ids.begin());
  };
  for (const Link& l : topology.links()) {
    if (topology.node(l.a).kind != NodeKind::switch_node ||
        topology.node(l.b).kind != NodeKind::switch_node) {
      continue;
    }
    const std::size_t a = index(l.a);
    const std::size_t b = index(l.b);
    sim.entries(a, b) = sim.entries(b, a) = 1.0;
  }
  return sim;
}

Matrix normalized_laplacian(const Matrix& adjacency, std::span<const std::string> names) {
  const std::size_t n = adjacency.rows();
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += adjacency(i, j);
    if (degree <= 0.0) {
      const std::string who = i < names.size() ? "'" + names[i] + "'" : "vertex " + std::to_string(i);
      throw Error(ErrorKind::invalid_argument,
                  "switch " + who + " has no switch neighbours; the normalized Laplacian is undefined");
    }
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  Matrix laplacian = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      laplacian(i, j) -= inv_sqrt_degree[i] * adjacency(i, j) * inv_sqrt_degree[j];
  return laplacian;
}

Matrix spectral_embedding(const Matrix& adjacency, int dims, std::span<const std::string> names) {
  const std::size_t n = adjacency.rows();
  if (dims < 1 || static_cast<std::size_t>(dims) > n) {
    throw Error(ErrorKind::invalid_argument, "embedding dimension must be in [1, vertex count]");
  }
  const auto eig = sym_eigendecomposition(normalized_laplacian(adjacency, names));
  const auto d = static_cast<std::size_t>(dims);
  Matrix embedding(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    double norm = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      embedding(r, c) = eig.vectors(r, c);
      norm += embedding(r, c) * embedding(r, c);
    }
    norm = std::sqrt(norm);
    if (norm > 1e-12) {
      for (std::size_t c = 0; c < d; ++c) embedding(r, c) /= norm;
    }
  }
  return embedding;
}

std::vector<int> spectral_partition(const Matrix& adjacency, const ClusteringConfig& config) {
  ClusteringConfig effective = config;
  effective.k = effective_k(config.k, static_cast<int>(adjacency.rows()));
  const Matrix embedding = spectral_embedding(adjacency, effective.k);
  return best_kmeans_run(embedding, effective).assignment;
}

ClusterModel spectral_cluster(const Topology& topology, const ClusteringConfig& config) {
  const SimilarityMatrix sim = similarity_matrix(topology);
  const PathMatrix paths = all_pairs_shortest_paths(topology);
  const FeatureSet features = server_features(topology, paths);
  if (features.size() == 0) throw Error(ErrorKind::invalid_argument, "topology has no servers");

  // Server-bearing switches, in switch-id order.
  std::vector<std::size_t> bearing;
  for (std::size_t i = 0; i < sim.switch_ids.size(); ++i) {
    for (const std::string& server : features.server_ids) {
      if (topology.attached_switch(server) == sim.switch_ids[i]) {
        bearing.push_back(i);
        break;
      }
    }
  }

  ClusteringConfig effective = config;
  effective.k = effective_k(config.k, static_cast<int>(bearing.size()));
  const Matrix embedding = spectral_embedding(sim.entries, effective.k, sim.switch_ids);
  Matrix points(bearing.size(), embedding.cols());
  for (std::size_t r = 0; r < bearing.size(); ++r) {
    std::copy_n(embedding.row(bearing[r]).begin(), embedding.cols(), points.row(r).begin());
  }
  auto run = best_kmeans_run(points, effective);

  ClusterModel model;
  model.method = ClusteringMethod::spectral;
  model.requested_k = config.k;
  model.k = effective.k;
  model.server_ids = features.server_ids;
  for (const std::string& server : features.server_ids) {
    const std::string& sw = topology.attached_switch(server);
    for (std::size_t r = 0; r < bearing.size(); ++r) {
      if (sim.switch_ids[bearing[r]] == sw) {
        model.assignment.push_back(run.assignment[r]);
        break;
      }
    }
  }
  model.sse = run.sse;
  model.sse_trace = std::move(run.sse_trace);
  model.iterations = run.iterations;
  canonicalize(model, features);
  return model;
}

}  // namespace sdnlb
