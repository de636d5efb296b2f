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

#include <cstddef>
#include <optional>
#include <span>

#include <nlohmann/json_fwd.hpp>

namespace smartjourney {

inline constexpr double kDefaultMapeFloor = 1.0;

struct MetricReport {
  /// Mean absolute percentage error in percent; empty when every pair fell
  /// under the floor.
  std::optional<double> mape_percent;
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t excluded_count = 0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// MAE and RMSE over all pairs; MAPE over pairs with actual >= mape_floor.
/// Throws Error(kEmptyInput) for empty input and kInvalidArgument for
/// mismatched lengths.
MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                             double mape_floor = kDefaultMapeFloor);

/// MAE and RMSE from the normalized pairs, MAPE from the raw-unit pairs.
MetricReport compute_metrics(std::span<const double> actual_normalized,
                             std::span<const double> predicted_normalized,
                             std::span<const double> actual_raw, std::span<const double> predicted_raw,
                             double mape_floor = kDefaultMapeFloor);

/// {"mape_percent": number|null, "mae", "rmse", "excluded_count"}.
nlohmann::json metrics_to_json(const MetricReport& report);
MetricReport metrics_from_json(const nlohmann::json& j);

}  // namespace smartjourney
