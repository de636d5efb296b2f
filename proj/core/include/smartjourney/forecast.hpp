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

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smartjourney/artifact.hpp"
#include "smartjourney/records.hpp"

namespace smartjourney {

inline constexpr int kDefaultHorizon = 12;
inline constexpr int kMaxHorizon = 48;

struct ForecastPoint {
  Hour timestamp{};
  double vehicles = 0.0;
  CongestionLevel level = CongestionLevel::kLow;
};

struct Forecast {
  std::string district;
  ModelType model = ModelType::kGbdt;
  Hour start{};  // last observed hour
  std::vector<ForecastPoint> points;
};

/// Recursive rollout from the last `artifact.window` rows of `history`
/// (sorted, consecutive hours). Each step predicts the next hour, clamps it
/// at zero and feeds it back as that hour's vehicle count; weather stays at
/// its last observed values. Throws Error(kInvalidHorizon) outside
/// [1, kMaxHorizon] and kInsufficientHistory when the tail is shorter than
/// the window, has a gap or lacks weather.
Forecast forecast(const ModelArtifact& artifact, std::span<const HourlyDistrictRow> history, int horizon);

/// {"district", "model", "generated_at", "points": [{"ts", "vehicles", "level"}]};
/// generated_at is the last observed hour so equal queries give equal bodies.
nlohmann::json forecast_to_json(const Forecast& f);

}  // namespace smartjourney
