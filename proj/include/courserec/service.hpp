#ifndef COURSEREC_SERVICE_HPP_
#define COURSEREC_SERVICE_HPP_

#include <cstdlib>
#include <string>
#include <utility>

#include <httplib.h>

#include "courserec/api.hpp"

namespace courserec {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Parses "host:port" or ":port". Returns `fallback` for anything else.
inline BindAddress parse_bind_address(const std::string& text, BindAddress fallback = {}) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) return fallback;
  BindAddress out = fallback;
  if (colon > 0) out.host = text.substr(0, colon);
  try {
    std::size_t used = 0;
    int port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || port < 0 || port > 65535) return fallback;
    out.port = port;
  } catch (const std::exception&) {
    return fallback;
  }
  return out;
}

/// COURSEREC_BIND overrides the configured bind address when set.
inline BindAddress bind_address_from_env(BindAddress configured) {
  if (const char* env = std::getenv("COURSEREC_BIND"); env && *env) {
    return parse_bind_address(env, configured);
  }
  return configured;
}

inline QueryParams query_of(const httplib::Request& req) {
  return QueryParams(req.params.begin(), req.params.end());
}

inline void reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

/// Registers the JSON endpoints on `server`. `api` must outlive the server.
inline void mount_routes(httplib::Server& server, Api& api) {
  server.Get("/health", [&](const httplib::Request&, httplib::Response& res) {
    reply(res, api.health());
  });
  server.Get("/courses", [&](const httplib::Request&, httplib::Response& res) {
    reply(res, api.courses());
  });
  server.Get("/courses/popular", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.popular(query_of(req)));
  });
  server.Get("/courses/top", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.top(query_of(req)));
  });
  server.Get("/students/:id", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.student(req.path_params.at("id")));
  });
  server.Post("/students", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.register_student(req.body));
  });
  server.Post("/students/:id/marks", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.add_mark(req.path_params.at("id"), req.body));
  });
  server.Get("/recommendation", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.recommendation(query_of(req)));
  });
  server.Post("/evaluate", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.evaluate(req.body));
  });
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) reply(res, Api::not_found(req.path));
  });
}

}  // namespace courserec

#endif  // COURSEREC_SERVICE_HPP_
