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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "smartjourney/artifact.hpp"
#include "smartjourney/geo.hpp"
#include "smartjourney/records.hpp"

namespace smartjourney {

struct ServiceConfig {
  std::filesystem::path models_dir;
  std::optional<std::filesystem::path> prepared_path;
  ModelType default_model = ModelType::kGbdt;
  /// Origins granted CORS access; "*" allows any.
  std::vector<std::string> cors_origins{"*"};
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

/// Read-only request handling over frozen artifacts and prepared history.
/// `handle` is const and safe to call from many threads at once.
class ForecastService {
 public:
  /// Loads every *.json artifact in config.models_dir and the prepared CSV.
  /// Any unreadable or invalid artifact, a duplicate (district, model) pair or
  /// an artifact for a district outside the registry throws.
  explicit ForecastService(const ServiceConfig& config);
  ForecastService(std::vector<ModelArtifact> artifacts, std::vector<HourlyDistrictRow> history,
                  ModelType default_model = ModelType::kGbdt);

  ApiResponse handle(std::string_view method, std::string_view path, const QueryParams& query) const;

  std::size_t artifact_count() const { return artifacts_.size(); }

 private:
  ApiResponse health() const;
  ApiResponse districts() const;
  ApiResponse models() const;
  ApiResponse history(const QueryParams& query) const;
  ApiResponse forecast(const QueryParams& query) const;

  const ModelArtifact* find(std::string_view district, ModelType type) const;
  std::span<const HourlyDistrictRow> rows_of(std::string_view district) const;

  std::vector<ModelArtifact> artifacts_;  // sorted by (district, model type)
  std::map<std::string, std::vector<HourlyDistrictRow>, std::less<>> history_;
  ModelType default_model_;
};

/// {"error": code, "message": text}.
ApiResponse error_response(int status, std::string_view code, std::string_view message);

/// HTTP front end for a ForecastService.
class HttpServer {
 public:
  HttpServer(const ForecastService& service, std::vector<std::string> cors_origins);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; port 0 picks a free one. Returns the bound port and
  /// throws Error(kIo) when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires a prior bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace smartjourney
