#include <httplib.h>

#include "sdnlb/service.hpp"

namespace sdnlb {

namespace {

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    server.Put("/topology", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.put_topology(req.body));
    });
    server.Get("/clusters", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.get_clusters(param(req, "k"), param(req, "method"), param(req, "seed")));
    });
    server.Get("/pools", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, service.get_pools());
    });
    server.Post("/requests", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.post_requests(req.body));
    });
    server.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, service.get_stats());
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

bool HttpServer::is_running() const { return impl_->server.is_running(); }

}  // namespace sdnlb
