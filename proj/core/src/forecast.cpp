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

#include "smartjourney/forecast.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "smartjourney/error.hpp"

namespace smartjourney {

Forecast forecast(const ModelArtifact& artifact, std::span<const HourlyDistrictRow> history, int horizon) {
  if (horizon < 1 || horizon > kMaxHorizon) {
    throw Error(ErrorCode::kInvalidHorizon,
                "horizon must lie in [1, " + std::to_string(kMaxHorizon) + "], got " + std::to_string(horizon));
  }
  if (!artifact.model) throw Error(ErrorCode::kInvalidArgument, "artifact has no model");
  const std::size_t w = artifact.window;
  if (history.size() < w || w == 0) {
    throw Error(ErrorCode::kInsufficientHistory, "need " + std::to_string(w) + " hours of history, have " +
                                                     std::to_string(history.size()));
  }
  const auto tail = history.subspan(history.size() - w);
  for (std::size_t i = 0; i < w; ++i) {
    if (!tail[i].weather || (i > 0 && tail[i].timestamp != tail[i - 1].timestamp + std::chrono::hours{1})) {
      throw Error(ErrorCode::kInsufficientHistory,
                  "the " + std::to_string(w) + " hours before " + format_hour_iso(tail.back().timestamp) +
                      " are not complete");
    }
  }

  const NormalizationParams& norm = artifact.normalization;
  Matrix window = window_matrix(tail, 0, w, norm);
  const RowVector held = window.row(static_cast<Eigen::Index>(w) - 1);

  Forecast f;
  f.district = artifact.district;
  f.model = artifact.model_type;
  f.start = tail.back().timestamp;
  Hour t = f.start;
  for (int step = 0; step < horizon; ++step) {
    t += std::chrono::hours{1};
    const double normalized = artifact.model->predict(window, t);
    const double vehicles = std::max(0.0, norm.invert(kTargetFeature, normalized));
    f.points.push_back({t, vehicles, artifact.congestion.level(vehicles)});

    // Shift up one hour and append the prediction with held weather.
    const auto rows = static_cast<Eigen::Index>(w);
    if (rows > 1) window.topRows(rows - 1) = window.bottomRows(rows - 1).eval();
    window.row(rows - 1) = held;
    window(rows - 1, static_cast<Eigen::Index>(kTargetFeature)) = norm.apply(kTargetFeature, vehicles);
  }
  return f;
}

nlohmann::json forecast_to_json(const Forecast& f) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : f.points) {
    points.push_back({{"ts", format_hour_iso(p.timestamp)},
                      {"vehicles", p.vehicles},
                      {"level", std::string(congestion_level_name(p.level))}});
  }
  return {{"district", f.district},
          {"model", std::string(model_type_name(f.model))},
          {"generated_at", format_hour_iso(f.start)},
          {"points", std::move(points)}};
}

}  // namespace smartjourney
