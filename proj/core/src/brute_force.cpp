#include <limits>

#include "sdnlb/error.hpp"
#include "sdnlb/kmeans.hpp"

namespace sdnlb {

namespace {

double partition_sse(const Matrix& points, const std::vector<int>& labels, int k) {
  Matrix means(static_cast<std::size_t>(k), points.cols());
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    counts[c] += 1.0;
    for (std::size_t d = 0; d < points.cols(); ++d) means(c, d) += points(i, d);
  }
  for (std::size_t c = 0; c < means.rows(); ++c)
    for (std::size_t d = 0; d < means.cols(); ++d) means(c, d) /= counts[c];
  double sse = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    sse += squared_distance(points.row(i), means.row(static_cast<std::size_t>(labels[i])));
  }
  return sse;
}

// Restricted growth strings enumerate each set partition exactly once.
void enumerate(const Matrix& points, int k, std::vector<int>& labels, std::size_t position,
               int used, double& best) {
  const auto n = points.rows();
  if (position == n) {
    if (used == k) best = std::min(best, partition_sse(points, labels, k));
    return;
  }
  // Not enough points left to open the remaining clusters.
  if (static_cast<std::size_t>(k - used) > n - position) return;
  const int limit = std::min(used + 1, k);
  for (int label = 0; label < limit; ++label) {
    labels[position] = label;
    enumerate(points, k, labels, position + 1, std::max(used, label + 1), best);
  }
}

}  // namespace

double brute_force_kmeans(const Matrix& points, int k) {
  if (points.rows() == 0) throw Error(ErrorKind::invalid_argument, "no points");
  if (points.rows() > 10) {
    throw Error(ErrorKind::invalid_argument,
                "brute force is limited to 10 points, got " + std::to_string(points.rows()));
  }
  if (k < 1 || static_cast<std::size_t>(k) > points.rows()) {
    throw Error(ErrorKind::invalid_argument, "k must be in [1, point count]");
  }
  std::vector<int> labels(points.rows(), 0);
  double best = std::numeric_limits<double>::infinity();
  enumerate(points, k, labels, 0, 0, best);
  return best;
}

double brute_force_kmeans(const FeatureSet& features, int k) {
  return brute_force_kmeans(feature_matrix(features), k);
}

}  // namespace sdnlb
