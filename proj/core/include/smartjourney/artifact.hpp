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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smartjourney/dataset.hpp"
#include "smartjourney/metrics.hpp"
#include "smartjourney/regressor.hpp"
#include "smartjourney/train_config.hpp"

namespace smartjourney {

inline constexpr int kArtifactFormatVersion = 1;

enum class CongestionLevel { kLow, kMedium, kHigh };
std::string_view congestion_level_name(CongestionLevel level);

/// Vehicle-count cut points: low below `low_upper`, medium below
/// `medium_upper`, high otherwise.
struct CongestionThresholds {
  double low_upper = 0.0;
  double medium_upper = 0.0;

  CongestionLevel level(double vehicles) const;
  friend bool operator==(const CongestionThresholds&, const CongestionThresholds&) = default;
};

/// Linear-interpolation quantile of `values` (need not be sorted), q in [0, 1].
double quantile(std::vector<double> values, double q);

/// 1/3 and 2/3 quantiles of the vehicle counts in `rows`.
CongestionThresholds fit_congestion_thresholds(std::span<const HourlyDistrictRow> rows);

/// A trained model with everything required to use it on raw rows.
struct ModelArtifact {
  ModelType model_type = ModelType::kGbdt;
  std::string district;
  std::string created_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  TrainConfig train_config;
  std::size_t window = 0;
  NormalizationParams normalization;
  CongestionThresholds congestion;
  MetricReport test_metrics;
  std::shared_ptr<const Regressor> model;
};

/// Current UTC time, or SOURCE_DATE_EPOCH when that variable is set.
std::string artifact_timestamp();

/// Little-endian IEEE-754 bytes of `values`.
std::vector<std::uint8_t> pack_doubles(std::span<const double> values);
std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws Error(kCorruptArtifact) on characters outside the standard
/// alphabet, bad padding or trailing garbage.
std::vector<std::uint8_t> base64_decode(std::string_view text);

nlohmann::json artifact_to_json(const ModelArtifact& artifact);
/// Checks the version first, then the payload checksum, then the structure.
ModelArtifact artifact_from_json(const nlohmann::json& j);

/// Writes via a temporary file renamed into place.
void save_artifact(const ModelArtifact& artifact, const std::filesystem::path& path);
/// Unparseable input (including a truncated file) is an integrity failure
/// and throws Error(kChecksumMismatch), as does a payload CRC mismatch.
ModelArtifact load_artifact(const std::filesystem::path& path);

}  // namespace smartjourney
