#include "sdnlb/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "sdnlb/error.hpp"
#include "sdnlb/rng.hpp"

namespace sdnlb {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

int effective_k(int requested_k, int n_points) {
  if (requested_k < 1 || n_points < 1) {
    throw Error(ErrorKind::invalid_argument, "k and point count must be positive");
  }
  return std::min(requested_k, n_points);
}

Matrix feature_matrix(const FeatureSet& features) {
  Matrix m(features.size(), 2);
  for (std::size_t i = 0; i < features.size(); ++i) {
    m(i, 0) = features.points[i].hops;
    m(i, 1) = features.points[i].delay_ms;
  }
  return m;
}

Matrix min_max_normalize(const Matrix& points) {
  Matrix out = points;
  for (std::size_t c = 0; c < points.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < points.rows(); ++r) {
      lo = std::min(lo, points(r, c));
      hi = std::max(hi, points(r, c));
    }
    const double range = hi - lo;
    for (std::size_t r = 0; r < points.rows(); ++r) {
      out(r, c) = range > 0.0 ? (points(r, c) - lo) / range : 0.0;
    }
  }
  return out;
}

std::vector<std::size_t> kmeanspp_seed_indices(const Matrix& points, int k,
                                               std::uint64_t rng_seed) {
  const std::size_t n = points.rows();
  if (k < 1) throw Error(ErrorKind::invalid_argument, "k must be positive");
  if (static_cast<std::size_t>(k) > n) {
    throw Error(ErrorKind::invalid_argument,
                "k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));
  }
  SplitMix64 rng(rng_seed);
  std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};
  std::vector<bool> taken(n, false);
  taken[chosen.front()] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), points.row(chosen[0]));

  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double d : d2) total += d;

    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cumulative += d2[i];
        pick = i;
        if (target < cumulative) break;
      }
    } else {
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) open.push_back(i);
      pick = open[rng.below(open.size())];
    }

    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(pick)));
    }
  }
  return chosen;
}

Matrix kmeanspp_seed(const Matrix& points, int k, std::uint64_t rng_seed) {
  const auto indices = kmeanspp_seed_indices(points, k, rng_seed);
  Matrix centroids(indices.size(), points.cols());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    std::copy_n(points.row(indices[c]).begin(), points.cols(), centroids.row(c).begin());
  }
  return centroids;
}

Matrix kmeanspp_seed(const FeatureSet& features, int k, std::uint64_t rng_seed) {
  return kmeanspp_seed(feature_matrix(features), k, rng_seed);
}

namespace {

std::vector<int> nearest_assignment(const Matrix& points, const Matrix& centroids) {
  std::vector<int> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    out[i] = best_c;
  }
  return out;
}

void fill_empty_clusters(const Matrix& points, Matrix& centroids, std::vector<int>& assignment) {
  std::vector<std::size_t> counts(centroids.rows(), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];

  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] != 0) continue;
    std::size_t donor = points.rows();
    double farthest = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      const auto owner = static_cast<std::size_t>(assignment[i]);
      if (counts[owner] < 2) continue;
      const double d = squared_distance(points.row(i), centroids.row(owner));
      if (d > farthest) {
        farthest = d;
        donor = i;
      }
    }
    if (donor == points.rows()) break;  // k > n; callers prevent this
    --counts[static_cast<std::size_t>(assignment[donor])];
    assignment[donor] = static_cast<int>(c);
    counts[c] = 1;
    std::copy_n(points.row(donor).begin(), points.cols(), centroids.row(c).begin());
  }
}

Matrix cluster_means(const Matrix& points, const std::vector<int>& assignment, const Matrix& fallback) {
  Matrix means(fallback.rows(), fallback.cols());
  std::vector<std::size_t> counts(fallback.rows(), 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto c = static_cast<std::size_t>(assignment[i]);
    ++counts[c];
    for (std::size_t d = 0; d < points.cols(); ++d) means(c, d) += points(i, d);
  }
  for (std::size_t c = 0; c < means.rows(); ++c) {
    for (std::size_t d = 0; d < means.cols(); ++d) {
      means(c, d) = counts[c] ? means(c, d) / static_cast<double>(counts[c]) : fallback(c, d);
    }
  }
  return means;
}

double total_sse(const Matrix& points, const std::vector<int>& assignment, const Matrix& centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    sum += squared_distance(points.row(i), centroids.row(static_cast<std::size_t>(assignment[i])));
  }
  return sum;
}

}  // namespace

LloydResult lloyd(const Matrix& points, Matrix initial_centroids, int max_iterations,
                  double tolerance) {
  if (points.rows() == 0 || initial_centroids.rows() == 0) {
    throw Error(ErrorKind::invalid_argument, "lloyd needs points and initial centroids");
  }
  if (initial_centroids.cols() != points.cols()) {
    throw Error(ErrorKind::invalid_argument, "centroid dimension differs from point dimension");
  }
  if (max_iterations < 1) throw Error(ErrorKind::invalid_argument, "max_iterations must be positive");

  LloydResult result;
  result.centroids = std::move(initial_centroids);
  result.assignment.assign(points.rows(), -1);

  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    auto next = nearest_assignment(points, result.centroids);
    fill_empty_clusters(points, result.centroids, next);
    if (next == result.assignment) break;
    result.assignment = std::move(next);
    result.centroids = cluster_means(points, result.assignment, result.centroids);

    const double sse = total_sse(points, result.assignment, result.centroids);
    assert(result.sse_trace.empty() ||
           sse <= result.sse_trace.back() + 1e-12 * std::max(1.0, result.sse_trace.back()));
    result.sse_trace.push_back(sse);
    result.iterations = iteration + 1;
    if (result.sse_trace.size() >= 2 &&
        result.sse_trace[result.sse_trace.size() - 2] - sse < tolerance) {
      break;
    }
  }
  result.sse = result.sse_trace.back();
  return result;
}

LloydResult best_kmeans_run(const Matrix& points, const ClusteringConfig& config) {
  if (config.restarts < 1) throw Error(ErrorKind::invalid_argument, "restarts must be positive");
  SplitMix64 seeds(config.rng_seed);
  LloydResult best;
  for (int r = 0; r < config.restarts; ++r) {
    const std::uint64_t seed = seeds.next();
    auto run = lloyd(points, kmeanspp_seed(points, config.k, seed), config.max_iterations,
                     config.tolerance);
    if (r == 0 || run.sse < best.sse) best = std::move(run);
  }
  return best;
}

namespace {

ClusterModel model_from_run(const FeatureSet& features, LloydResult run, int requested_k, int k) {
  ClusterModel model;
  model.method = ClusteringMethod::kmeans;
  model.requested_k = requested_k;
  model.k = k;
  model.server_ids = features.server_ids;
  model.assignment = std::move(run.assignment);
  model.sse = run.sse;
  model.sse_trace = std::move(run.sse_trace);
  model.iterations = run.iterations;
  canonicalize(model, features);
  return model;
}

void check_features(const FeatureSet& features) {
  if (features.size() == 0) throw Error(ErrorKind::invalid_argument, "feature set is empty");
  if (features.server_ids.size() != features.points.size()) {
    throw Error(ErrorKind::invalid_argument, "feature points and server ids differ in length");
  }
}

}  // namespace

ClusterModel lloyd(const FeatureSet& features, const Matrix& initial_centroids,
                   const ClusteringConfig& config) {
  check_features(features);
  const Matrix raw = feature_matrix(features);
  auto run = lloyd(raw, initial_centroids, config.max_iterations, config.tolerance);
  const int k = static_cast<int>(initial_centroids.rows());
  return model_from_run(features, std::move(run), k, k);
}

ClusterModel kmeans_cluster(const FeatureSet& features, const ClusteringConfig& config) {
  check_features(features);
  ClusteringConfig effective = config;
  effective.k = effective_k(config.k, static_cast<int>(features.size()));
  Matrix points = feature_matrix(features);
  if (config.normalize_features) points = min_max_normalize(points);
  return model_from_run(features, best_kmeans_run(points, effective), config.k, effective.k);
}

}  // namespace sdnlb
