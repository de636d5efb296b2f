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

#include <cstdint>
#include <optional>
#include <string>

#include "smartjourney/geo.hpp"
#include "smartjourney/time.hpp"

namespace smartjourney {

/// One row of the municipal hourly traffic density export.
struct TrafficRecord {
  std::int64_t row_id = 0;
  Hour timestamp{};
  LatLon position;
  std::string geohash;
  double min_speed = 0.0;
  double max_speed = 0.0;
  double avg_speed = 0.0;
  std::int64_t num_vehicles = 0;
};

struct WeatherFeatures {
  double t2m = 0.0;
  double qv2m = 0.0;
  double wind_direction = 0.0;  // degrees, [0, 360)
  double wind_speed = 0.0;
  double precipitation = 0.0;

  friend bool operator==(const WeatherFeatures&, const WeatherFeatures&) = default;
};

struct WeatherRecord {
  Hour timestamp{};
  WeatherFeatures features;
  LatLon position;
  std::string district;
};

/// Per-district, per-hour aggregate joined with that hour's weather.
struct HourlyDistrictRow {
  Hour timestamp{};
  std::string district;
  double min_speed = 0.0;
  double max_speed = 0.0;
  double avg_speed = 0.0;
  std::int64_t num_vehicles = 0;
  std::optional<WeatherFeatures> weather;

  friend bool operator==(const HourlyDistrictRow&, const HourlyDistrictRow&) = default;
};

}  // namespace smartjourney
