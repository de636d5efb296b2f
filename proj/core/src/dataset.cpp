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

#include "smartjourney/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "smartjourney/error.hpp"

namespace smartjourney {

std::array<double, kModelFeatures.size()> feature_values(const HourlyDistrictRow& row) {
  if (!row.weather) {
    throw Error(ErrorCode::kInvalidArgument,
                "row " + format_hour(row.timestamp) + " " + row.district + " has no weather");
  }
  const WeatherFeatures& w = *row.weather;
  return {static_cast<double>(row.num_vehicles), w.t2m, w.qv2m, w.wind_direction, w.wind_speed,
          w.precipitation};
}

NormalizationParams::NormalizationParams(std::vector<std::string> names,
                                         std::vector<FeatureRange> ranges)
    : names_(std::move(names)), ranges_(std::move(ranges)) {
  if (names_.size() != ranges_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "normalization names/ranges size mismatch");
  }
  for (const auto& r : ranges_) {
    if (!(r.max >= r.min)) throw Error(ErrorCode::kInvalidArgument, "normalization range has max < min");
  }
}

double NormalizationParams::apply(std::size_t feature, double value) const {
  const FeatureRange& r = ranges_.at(feature);
  if (r.max == r.min) return 0.0;
  return (value - r.min) / (r.max - r.min);
}

double NormalizationParams::invert(std::size_t feature, double normalized) const {
  const FeatureRange& r = ranges_.at(feature);
  if (r.max == r.min) return r.min;
  return r.min + normalized * (r.max - r.min);
}

NormalizationParams fit_normalization(std::span<const HourlyDistrictRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "cannot fit normalization on no rows");
  std::vector<FeatureRange> ranges(kModelFeatures.size());
  const auto first = feature_values(rows.front());
  for (std::size_t f = 0; f < ranges.size(); ++f) ranges[f] = {first[f], first[f]};
  for (const auto& row : rows) {
    const auto v = feature_values(row);
    for (std::size_t f = 0; f < ranges.size(); ++f) {
      ranges[f].min = std::min(ranges[f].min, v[f]);
      ranges[f].max = std::max(ranges[f].max, v[f]);
    }
  }
  return NormalizationParams({kModelFeatures.begin(), kModelFeatures.end()}, std::move(ranges));
}

std::vector<std::size_t> window_starts(std::span<const HourlyDistrictRow> rows, std::size_t window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window must be at least 1");
  std::vector<std::size_t> starts;
  if (rows.size() <= window) return starts;
  // run[i]: length of the consecutive-hour run ending at row i.
  std::vector<std::size_t> run(rows.size(), 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].timestamp - rows[i - 1].timestamp == std::chrono::hours{1}) run[i] = run[i - 1] + 1;
  }
  for (std::size_t target = window; target < rows.size(); ++target) {
    if (run[target] >= window + 1) starts.push_back(target - window);
  }
  return starts;
}

Matrix window_matrix(std::span<const HourlyDistrictRow> rows, std::size_t first,
                     std::size_t window, const NormalizationParams& norm) {
  Matrix m(static_cast<Eigen::Index>(window), static_cast<Eigen::Index>(kModelFeatures.size()));
  for (std::size_t t = 0; t < window; ++t) {
    const auto v = feature_values(rows[first + t]);
    for (std::size_t f = 0; f < v.size(); ++f) {
      m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) = norm.apply(f, v[f]);
    }
  }
  return m;
}

namespace {

std::vector<WindowedSample> build_samples(std::span<const HourlyDistrictRow> rows,
                                          std::span<const std::size_t> starts, std::size_t window,
                                          const NormalizationParams& norm) {
  std::vector<WindowedSample> samples;
  samples.reserve(starts.size());
  for (std::size_t s : starts) {
    const HourlyDistrictRow& target_row = rows[s + window];
    samples.push_back(WindowedSample{
        window_matrix(rows, s, window, norm),
        norm.apply(kTargetFeature, static_cast<double>(target_row.num_vehicles)),
        target_row.timestamp});
  }
  return samples;
}

}  // namespace

std::vector<WindowedSample> make_windows(std::span<const HourlyDistrictRow> rows,
                                         std::size_t window, const NormalizationParams& norm) {
  const auto starts = window_starts(rows, window);
  return build_samples(rows, starts, window, norm);
}

SplitRanges chrono_split(std::size_t n, SplitFractions f) {
  if (n < 3) throw Error(ErrorCode::kEmptyInput, "need at least 3 samples to split");
  if (f.train < 0 || f.validation < 0 || f.test < 0 ||
      std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split fractions must be non-negative and sum to 1");
  }
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.train));
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.validation));
  SplitRanges r;
  r.train = {0, n_train};
  r.validation = {n_train, n_train + n_val};
  r.test = {n_train + n_val, n};
  return r;
}

std::span<const HourlyDistrictRow> PreparedDataset::training_rows() const {
  if (splits.train.empty()) return {};
  const std::size_t last = starts[splits.train.end - 1] + window;
  return std::span<const HourlyDistrictRow>(rows).subspan(0, last + 1);
}

std::vector<WindowedSample> PreparedDataset::materialize(const NormalizationParams& norm) const {
  return build_samples(rows, starts, window, norm);
}

PreparedDataset prepare_dataset(std::vector<HourlyDistrictRow> rows, std::string district,
                                const DatasetOptions& options) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  PreparedDataset ds;
  ds.district = std::move(district);
  ds.window = options.window;
  ds.rows = std::move(rows);
  ds.starts = window_starts(ds.rows, ds.window);
  ds.splits = chrono_split(ds.starts.size(), options.fractions);
  if (ds.splits.train.empty()) throw Error(ErrorCode::kEmptyInput, "training split is empty");
  ds.normalization = fit_normalization(ds.training_rows());
  ds.samples = build_samples(ds.rows, ds.starts, ds.window, ds.normalization);
  return ds;
}

std::vector<HourlyDistrictRow> synth_series(const SynthParams& p) {
  if (p.days < 1) throw Error(ErrorCode::kInvalidArgument, "synth_series needs at least one day");
  Rng rng(p.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const std::size_t hours = static_cast<std::size_t>(p.days) * 24;
  std::vector<HourlyDistrictRow> rows;
  rows.reserve(hours);
  double wind_direction = 180.0;
  double rain_left = 0.0;
  for (std::size_t k = 0; k < hours; ++k) {
    const Hour ts = p.start + std::chrono::hours{static_cast<long>(k)};
    const int hour = hour_of_day(ts);
    const int dow = day_of_week(ts);
    const double day_angle = 2.0 * std::numbers::pi * hour / 24.0;

    WeatherFeatures w;
    w.t2m = 18.0 + 5.0 * std::sin(day_angle - 2.0) + 0.5 * unit(rng);
    w.qv2m = 9.5 + 0.6 * std::cos(day_angle) + 0.2 * unit(rng);
    wind_direction = std::fmod(wind_direction + 15.0 * unit(rng) + 360.0, 360.0);
    w.wind_direction = wind_direction;
    w.wind_speed = std::max(0.0, 3.0 + 1.0 * unit(rng));
    if (rain_left <= 0.0 && uniform(rng) < 0.02) rain_left = 2.0 + 6.0 * uniform(rng);
    w.precipitation = rain_left > 0.0 ? 0.2 + 0.8 * uniform(rng) : 0.0;
    rain_left -= 1.0;

    const double weekday_factor = dow < 5 ? 1.0 : -1.0;
    const double seasonal =
        p.base * (1.0 + p.daily_amplitude * std::sin(day_angle + p.phase) +
                  p.weekday_amplitude * weekday_factor);
    const double noise = p.noise_sd * p.base * unit(rng);
    const double vehicles = std::max(0.0, seasonal + p.precip_effect * w.precipitation + noise);

    HourlyDistrictRow row;
    row.timestamp = ts;
    row.district = p.district;
    row.num_vehicles = static_cast<std::int64_t>(std::llround(vehicles));
    const double load = p.base > 0.0 ? vehicles / p.base : 0.0;
    row.avg_speed = std::clamp(75.0 - 12.0 * load, 10.0, 110.0);
    row.min_speed = std::max(1.0, row.avg_speed - 40.0);
    row.max_speed = row.avg_speed + 60.0;
    row.weather = w;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace smartjourney
