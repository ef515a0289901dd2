#include "sdnlb/service.hpp"

#include <charconv>

#include "sdnlb/error.hpp"
#include "sdnlb/kmeans.hpp"
#include "sdnlb/paths.hpp"
#include "sdnlb/spectral.hpp"

namespace sdnlb {

namespace {

using json = nlohmann::ordered_json;

Response ok(const json& body) { return {200, body.dump()}; }

Response fail(int status, std::string_view error, const std::string& detail) {
  json body;
  body["error"] = error;
  body["detail"] = detail;
  return {status, body.dump()};
}

int status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument: return 400;
    case ErrorKind::validation: return 422;
    case ErrorKind::not_found: return 404;
    case ErrorKind::precondition: return 409;
  }
  return 500;
}

std::string_view error_name(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument: return "bad_request";
    case ErrorKind::validation: return "validation_failed";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::precondition: return "conflict";
  }
  return "internal";
}

Response fail(const Error& e) { return fail(status_for(e), error_name(e), e.what()); }

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string fraction(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double as_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

Response Service::put_topology(std::string_view body) {
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return fail(400, "bad_request", std::string("body is not valid JSON: ") + e.what());
  }
  try {
    Topology topology = load_topology(document);
    const std::uint64_t fp = fingerprint(topology);
    const PathMatrix paths = all_pairs_shortest_paths(topology);
    FeatureSet features = server_features(topology, paths);

    std::lock_guard lock(mutex_);
    if (!topology_ || topology_fingerprint_ != fp) {
      topology_ = std::move(topology);
      topology_fingerprint_ = fp;
      features_ = std::move(features);
      active_key_.reset();
      model_.reset();
      pools_.reset();
      counters_.clear();
      for (const std::string& s : features_.server_ids) counters_[s] = 0;
    }
    json out;
    out["nodes"] = topology_->nodes().size();
    out["links"] = topology_->links().size();
    out["servers"] = features_.server_ids.size();
    return ok(out);
  } catch (const Error& e) {
    return fail(e);
  }
}

Response Service::get_clusters(std::optional<std::string> k_text,
                               std::optional<std::string> method_text,
                               std::optional<std::string> seed_text) {
  ClusteringConfig config;
  if (k_text) {
    const auto k = parse_number<int>(*k_text);
    if (!k || *k < 1) return fail(400, "bad_request", "k must be a positive integer");
    config.k = *k;
  }
  ClusteringMethod method = ClusteringMethod::kmeans;
  if (method_text) {
    const auto m = parse_clustering_method(*method_text);
    if (!m) return fail(400, "bad_request", "method must be kmeans or spectral");
    method = *m;
  }
  if (seed_text) {
    const auto seed = parse_number<std::uint64_t>(*seed_text);
    if (!seed) return fail(400, "bad_request", "seed must be an unsigned 64-bit integer");
    config.rng_seed = *seed;
  }

  std::lock_guard lock(mutex_);
  if (!topology_) return fail(409, "conflict", "no topology loaded; PUT /topology first");
  if (features_.size() == 0) return fail(422, "validation_failed", "topology has no server hosts");

  const CacheKey key{topology_fingerprint_, config.k, method, config.rng_seed};
  try {
    auto cached = cache_.find(key);
    if (cached == cache_.end()) {
      ClusterModel model = method == ClusteringMethod::kmeans
                               ? kmeans_cluster(features_, config)
                               : spectral_cluster(*topology_, config);
      cached = cache_.emplace(key, std::move(model)).first;
    }
    if (active_key_ != key) {
      pools_ = build_pools(cached->second, features_);
      model_ = cached->second;
      active_key_ = key;
    }
    return ok(to_json(cached->second));
  } catch (const Error& e) {
    return fail(status_for(e) == 400 ? 422 : status_for(e), error_name(e), e.what());
  }
}

Response Service::get_pools() {
  std::lock_guard lock(mutex_);
  if (!pools_) return fail(409, "conflict", "no pools; GET /clusters first");
  return ok(export_pools(*pools_, &*topology_));
}

Response Service::post_requests(std::string_view body) {
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return fail(400, "bad_request", std::string("body is not valid JSON: ") + e.what());
  }
  if (!request.is_object() || !request.contains("target") || !request.contains("count")) {
    return fail(400, "bad_request", "body requires 'target' and 'count'");
  }
  const auto& count_field = request["count"];
  if (!count_field.is_number_integer() || count_field.get<std::int64_t>() < 0) {
    return fail(400, "bad_request", "count must be a non-negative integer");
  }
  const auto count = count_field.get<std::int64_t>();
  RequestSplit split;
  const auto& target = request["target"];
  if (target.is_string() && target.get<std::string>() == "auto") {
    split = EqualPerCluster{};
  } else if (target.is_number_integer()) {
    split = SingleCluster{target.get<int>()};
  } else {
    return fail(400, "bad_request", "target must be \"auto\" or a cluster index");
  }

  std::lock_guard lock(mutex_);
  if (!pools_) return fail(409, "conflict", "no pools; GET /clusters first");
  try {
    const auto sequence = dispatch_requests(*pools_, count, split);
    json out;
    out["target"] = target;
    out["count"] = count;
    out["assignments"] = json::array();
    for (const std::string& server : sequence) {
      ++counters_[server];
      out["assignments"].push_back({{"server", server}, {"cluster", pools_->cluster_of(server)}});
    }
    return ok(out);
  } catch (const Error& e) {
    return fail(e);
  }
}

Response Service::get_stats() {
  std::lock_guard lock(mutex_);
  if (!topology_) return fail(409, "conflict", "no topology loaded; PUT /topology first");
  json out;
  std::int64_t total = 0;
  out["counters"] = json::object();
  for (const auto& [server, count] : counters_) {
    out["counters"][server] = count;
    total += count;
  }
  out["total"] = total;
  out["per_cluster"] = json::array();
  out["load_summary"] = nullptr;
  if (pools_ && model_) {
    for (const Pool& p : pools_->pools()) {
      std::int64_t sum = 0;
      for (const std::string& m : p.members) sum += counters_.at(m);
      out["per_cluster"].push_back({{"cluster", p.cluster_index}, {"requests", sum}});
    }
    const LoadSummary s =
        load_summary(static_cast<int>(features_.size()), model_->k, total);
    json summary;
    summary["n_servers"] = s.n_servers;
    summary["k"] = s.k;
    summary["requests"] = s.requests;
    summary["avg_servers_per_cluster"] = as_double(s.avg_servers_per_cluster);
    summary["avg_servers_per_cluster_exact"] = fraction(s.avg_servers_per_cluster);
    summary["capacity_multiplier_pct"] = s.capacity_multiplier_pct;
    summary["avg_load_largest_cluster"] = as_double(s.avg_load_largest_cluster);
    summary["avg_load_largest_cluster_exact"] = fraction(s.avg_load_largest_cluster);
    out["load_summary"] = std::move(summary);
  }
  return ok(out);
}

bool Service::stages_consistent() const {
  std::lock_guard lock(mutex_);
  if (pools_ && !model_) return false;
  if (model_ && !topology_) return false;
  return true;
}

}  // namespace sdnlb
