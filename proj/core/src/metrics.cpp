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

#include "smartjourney/metrics.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "smartjourney/error.hpp"

namespace smartjourney {
namespace {

void check_pair(std::span<const double> a, std::span<const double> p) {
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "metrics need at least one pair");
  if (a.size() != p.size()) {
    throw Error(ErrorCode::kInvalidArgument, "actual and predicted lengths differ");
  }
}

std::optional<double> mape_of(std::span<const double> a, std::span<const double> p, double floor,
                              std::size_t& excluded) {
  double sum = 0.0;
  std::size_t used = 0;
  excluded = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= floor && a[i] != 0.0) {
      sum += std::abs(a[i] - p[i]) / a[i];
      ++used;
    } else {
      ++excluded;
    }
  }
  if (used == 0) return std::nullopt;
  return 100.0 * (sum / static_cast<double>(used));
}

}  // namespace

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                             double mape_floor) {
  return compute_metrics(actual, predicted, actual, predicted, mape_floor);
}

MetricReport compute_metrics(std::span<const double> actual_normalized,
                             std::span<const double> predicted_normalized,
                             std::span<const double> actual_raw, std::span<const double> predicted_raw,
                             double mape_floor) {
  check_pair(actual_normalized, predicted_normalized);
  check_pair(actual_raw, predicted_raw);
  if (actual_raw.size() != actual_normalized.size()) {
    throw Error(ErrorCode::kInvalidArgument, "normalized and raw lengths differ");
  }
  MetricReport r;
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < actual_normalized.size(); ++i) {
    const double d = predicted_normalized[i] - actual_normalized[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(actual_normalized.size());
  r.mae = abs_sum / n;
  r.rmse = std::sqrt(sq_sum / n);
  r.mape_percent = mape_of(actual_raw, predicted_raw, mape_floor, r.excluded_count);
  return r;
}

nlohmann::json metrics_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["mape_percent"] = report.mape_percent ? nlohmann::json(*report.mape_percent) : nlohmann::json(nullptr);
  j["mae"] = report.mae;
  j["rmse"] = report.rmse;
  j["excluded_count"] = report.excluded_count;
  return j;
}

MetricReport metrics_from_json(const nlohmann::json& j) {
  try {
    MetricReport r;
    const auto& mape = j.at("mape_percent");
    if (!mape.is_null()) r.mape_percent = mape.get<double>();
    r.mae = j.at("mae").get<double>();
    r.rmse = j.at("rmse").get<double>();
    r.excluded_count = j.at("excluded_count").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("bad metrics object: ") + e.what());
  }
}

}  // namespace smartjourney
