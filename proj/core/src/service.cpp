// Copyright 2026 The Smart Journey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smartjourney/service.hpp"

#include <algorithm>
#include <charconv>

#include "httplib.h"
#include "smartjourney/error.hpp"
#include "smartjourney/forecast.hpp"
#include "smartjourney/ingest.hpp"

namespace smartjourney {

using nlohmann::json;

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
  return {status, {{"error", std::string(code)}, {"message", std::string(message)}}};
}

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDistrict:
    case ErrorCode::kModelNotFound: return 404;
    case ErrorCode::kInsufficientHistory: return 409;
    case ErrorCode::kInvalidHorizon:
    case ErrorCode::kInvalidTimestamp:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownModel: return 400;
    default: return 500;
  }
}

std::optional<std::string_view> param(const QueryParams& q, std::string_view key) {
  if (auto it = q.find(key); it != q.end()) return it->second;
  return std::nullopt;
}

void sort_artifacts(std::vector<ModelArtifact>& artifacts) {
  std::sort(artifacts.begin(), artifacts.end(), [](const ModelArtifact& a, const ModelArtifact& b) {
    return std::pair(a.district, static_cast<int>(a.model_type)) < std::pair(b.district, static_cast<int>(b.model_type));
  });
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    if (find_district(default_districts(), artifacts[i].district) == nullptr) {
      throw Error(ErrorCode::kUnknownDistrict, "artifact for unknown district " + artifacts[i].district);
    }
    if (i > 0 && artifacts[i].district == artifacts[i - 1].district &&
        artifacts[i].model_type == artifacts[i - 1].model_type) {
      throw Error(ErrorCode::kInvalidArgument, "two " + std::string(model_type_name(artifacts[i].model_type)) +
                                                   " artifacts for " + artifacts[i].district);
    }
  }
}

}  // namespace

ForecastService::ForecastService(std::vector<ModelArtifact> artifacts, std::vector<HourlyDistrictRow> history,
                                 ModelType default_model)
    : artifacts_(std::move(artifacts)), default_model_(default_model) {
  sort_artifacts(artifacts_);
  for (auto& row : history) history_[row.district].push_back(std::move(row));
  for (auto& [name, rows] : history_) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const HourlyDistrictRow& a, const HourlyDistrictRow& b) { return a.timestamp < b.timestamp; });
  }
}

ForecastService::ForecastService(const ServiceConfig& config) : default_model_(config.default_model) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config.models_dir)) {
    throw Error(ErrorCode::kIo, "models directory " + config.models_dir.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.models_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      artifacts_.push_back(load_artifact(file));
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what());
    }
  }
  sort_artifacts(artifacts_);
  if (config.prepared_path) {
    for (auto& row : read_prepared_csv(*config.prepared_path)) history_[row.district].push_back(std::move(row));
    for (auto& [name, rows] : history_) {
      std::stable_sort(rows.begin(), rows.end(),
                       [](const HourlyDistrictRow& a, const HourlyDistrictRow& b) { return a.timestamp < b.timestamp; });
    }
  }
}

const ModelArtifact* ForecastService::find(std::string_view district, ModelType type) const {
  for (const auto& a : artifacts_) {
    if (a.district == district && a.model_type == type) return &a;
  }
  return nullptr;
}

std::span<const HourlyDistrictRow> ForecastService::rows_of(std::string_view district) const {
  if (auto it = history_.find(district); it != history_.end()) return it->second;
  return {};
}

ApiResponse ForecastService::handle(std::string_view method, std::string_view path,
                                    const QueryParams& query) const {
  static constexpr std::array<std::string_view, 5> kPaths = {"/health", "/v1/districts", "/v1/models",
                                                             "/v1/history", "/v1/forecast"};
  if (std::find(kPaths.begin(), kPaths.end(), path) == kPaths.end()) {
    return error_response(404, "not_found", "no endpoint at " + std::string(path));
  }
  if (method != "GET") return error_response(405, "method_not_allowed", "only GET is supported");
  try {
    if (path == "/health") return health();
    if (path == "/v1/districts") return districts();
    if (path == "/v1/models") return models();
    if (path == "/v1/history") return history(query);
    return forecast(query);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), e.code_name(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal_error", e.what());
  }
}

ApiResponse ForecastService::health() const { return {200, {{"status", "ok"}}}; }

ApiResponse ForecastService::districts() const {
  json out = json::array();
  for (const auto& d : default_districts()) {
    json models = json::array();
    for (const auto& a : artifacts_) {
      if (a.district == d.name) models.push_back(std::string(model_type_name(a.model_type)));
    }
    out.push_back({{"name", d.name},
                   {"latitude", d.location.latitude},
                   {"longitude", d.location.longitude},
                   {"models_available", std::move(models)}});
  }
  return {200, std::move(out)};
}

ApiResponse ForecastService::models() const {
  json out = json::array();
  for (const auto& a : artifacts_) {
    out.push_back({{"model_type", std::string(model_type_name(a.model_type))},
                   {"district", a.district},
                   {"created_at", a.created_at},
                   {"test_metrics", metrics_to_json(a.test_metrics)}});
  }
  return {200, std::move(out)};
}

ApiResponse ForecastService::history(const QueryParams& query) const {
  const auto district = param(query, "district");
  if (!district) return error_response(400, "missing_parameter", "district is required");
  if (find_district(default_districts(), *district) == nullptr) {
    return error_response(404, "unknown_district", "unknown district " + std::string(*district));
  }
  std::optional<Hour> from, to;
  for (auto [key, slot] : {std::pair{"from", &from}, std::pair{"to", &to}}) {
    if (const auto text = param(query, key)) {
      *slot = parse_hour(*text);
      if (!*slot) return error_response(400, "invalid_timestamp", std::string(key) + " is not a timestamp");
    }
  }
  if (from && to && *from > *to) return error_response(400, "bad_range", "from is after to");

  json out = json::array();
  for (const auto& row : rows_of(*district)) {
    if ((from && row.timestamp < *from) || (to && row.timestamp > *to)) continue;
    out.push_back({{"ts", format_hour_iso(row.timestamp)}, {"vehicles", row.num_vehicles}});
  }
  return {200, std::move(out)};
}

ApiResponse ForecastService::forecast(const QueryParams& query) const {
  const auto district = param(query, "district");
  if (!district) return error_response(400, "missing_parameter", "district is required");
  if (find_district(default_districts(), *district) == nullptr) {
    return error_response(404, "unknown_district", "unknown district " + std::string(*district));
  }

  ModelType type = default_model_;
  if (const auto name = param(query, "model")) {
    const auto parsed = parse_model_type(*name);
    if (!parsed) return error_response(400, "invalid_model", "unknown model " + std::string(*name));
    type = *parsed;
  }

  int horizon = kDefaultHorizon;
  if (const auto text = param(query, "horizon")) {
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, horizon);
    if (ec != std::errc{} || ptr != end) {
      return error_response(400, "invalid_horizon", "horizon must be an integer");
    }
  }

  std::optional<Hour> start;
  if (const auto text = param(query, "start")) {
    start = parse_hour(*text);
    if (!start) return error_response(400, "invalid_timestamp", "start is not a timestamp");
  }

  const ModelArtifact* artifact = find(*district, type);
  if (artifact == nullptr) {
    return error_response(404, "model_not_found",
                          "no " + std::string(model_type_name(type)) + " model for " + std::string(*district));
  }
  if (horizon < 1 || horizon > kMaxHorizon) {
    return error_response(400, "invalid_horizon", "horizon must lie in [1, " + std::to_string(kMaxHorizon) + "]");
  }

  auto rows = rows_of(*district);
  if (start) {
    const auto end = std::upper_bound(rows.begin(), rows.end(), *start,
                                      [](Hour t, const HourlyDistrictRow& r) { return t < r.timestamp; });
    rows = rows.first(static_cast<std::size_t>(end - rows.begin()));
    if (rows.empty() || rows.back().timestamp != *start) {
      return error_response(409, "insufficient_history", "no observation at " + format_hour_iso(*start));
    }
  }
  if (rows.empty()) return error_response(409, "insufficient_history", "no history for " + std::string(*district));
  return {200, forecast_to_json(smartjourney::forecast(*artifact, rows, horizon))};
}

struct HttpServer::Impl {
  Impl(const ForecastService& s, std::vector<std::string> o) : service(s), origins(std::move(o)) {}

  const ForecastService& service;
  std::vector<std::string> origins;
  httplib::Server server;
  bool bound = false;

  std::optional<std::string> allowed_origin(const httplib::Request& req) const {
    const bool any = std::find(origins.begin(), origins.end(), "*") != origins.end();
    if (!req.has_header("Origin")) return any ? std::optional<std::string>("*") : std::nullopt;
    const std::string origin = req.get_header_value("Origin");
    if (any) return std::string("*");
    if (std::find(origins.begin(), origins.end(), origin) != origins.end()) return origin;
    return std::nullopt;
  }
};

HttpServer::HttpServer(const ForecastService& service, std::vector<std::string> cors_origins)
    : impl_(std::make_unique<Impl>(service, std::move(cors_origins))) {
  Impl* impl = impl_.get();
  impl->server.set_pre_routing_handler([impl](const httplib::Request& req, httplib::Response& res) {
    if (const auto origin = impl->allowed_origin(req)) {
      res.set_header("Access-Control-Allow-Origin", *origin);
      if (*origin != "*") res.set_header("Vary", "Origin");
    }
    if (req.method == "OPTIONS") {
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
      return httplib::Server::HandlerResponse::Handled;
    }
    QueryParams query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);  // first value wins
    const ApiResponse r = impl->service.handle(req.method, req.path, query);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
    return httplib::Server::HandlerResponse::Handled;
  });
  // No SO_REUSEPORT: a second server must not share an occupied port.
  impl->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl->server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const ApiResponse r = error_response(res.status, "http_error", httplib::status_message(res.status));
    res.set_content(r.body.dump(), "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void HttpServer::run() {
  if (!impl_->bound) throw Error(ErrorCode::kInvalidArgument, "bind() before run()");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace smartjourney
