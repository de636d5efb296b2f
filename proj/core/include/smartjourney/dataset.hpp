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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smartjourney/records.hpp"
#include "smartjourney/tensor.hpp"

namespace smartjourney {

/// Per-hour model inputs, in column order. Column 0 is also the target.
inline constexpr std::array<std::string_view, 6> kModelFeatures = {
    "NUMBER_OF_VEHICLES", "T2M", "QV2M", "WD2M", "WS2M", "PRECTOTCORR"};
inline constexpr std::size_t kTargetFeature = 0;

/// Raw feature values of one prepared row in kModelFeatures order.
std::array<double, kModelFeatures.size()> feature_values(const HourlyDistrictRow& row);

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// Min-max scaling to [0, 1]; a feature with max == min maps to 0.
class NormalizationParams {
 public:
  NormalizationParams() = default;
  NormalizationParams(std::vector<std::string> names, std::vector<FeatureRange> ranges);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<FeatureRange>& ranges() const { return ranges_; }
  std::size_t size() const { return ranges_.size(); }

  double apply(std::size_t feature, double value) const;
  double invert(std::size_t feature, double normalized) const;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<FeatureRange> ranges_;
};

/// Fits per-feature ranges on `rows`. Throws Error(kEmptyInput) when empty.
NormalizationParams fit_normalization(std::span<const HourlyDistrictRow> rows);

struct WindowedSample {
  Matrix inputs;  // window x features, normalized
  double target = 0.0;  // normalized vehicles at the hour after the window
  Hour target_timestamp{};
};

/// Start indices i such that rows [i, i + window] are consecutive hours.
std::vector<std::size_t> window_starts(std::span<const HourlyDistrictRow> rows, std::size_t window);

/// Normalized input matrix for rows [first, first + window).
Matrix window_matrix(std::span<const HourlyDistrictRow> rows, std::size_t first,
                     std::size_t window, const NormalizationParams& norm);

/// All gap-free windows of `rows` (sorted by timestamp). A gap-free series of
/// N rows yields N - window samples; fewer than window + 1 rows yields none.
std::vector<WindowedSample> make_windows(std::span<const HourlyDistrictRow> rows,
                                         std::size_t window, const NormalizationParams& norm);

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct SplitRanges {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
};

/// Contiguous chronological split of n samples: floor(n * f) for train and
/// validation, the remainder to test. Throws for n < 3 or fractions that do
/// not sum to 1.
SplitRanges chrono_split(std::size_t n, SplitFractions fractions = {});

struct DatasetOptions {
  std::size_t window = 24;
  SplitFractions fractions;
};

/// Windowed, normalized, split samples of one district.
///
/// Normalization is fitted on the rows the training samples read (their
/// inputs and targets) and never sees validation or test rows.
struct PreparedDataset {
  std::string district;
  std::size_t window = 0;
  std::vector<HourlyDistrictRow> rows;
  std::vector<std::size_t> starts;  // window start index per sample
  std::vector<WindowedSample> samples;
  SplitRanges splits;
  NormalizationParams normalization;

  std::span<const WindowedSample> train() const { return slice(splits.train); }
  std::span<const WindowedSample> validation() const { return slice(splits.validation); }
  std::span<const WindowedSample> test() const { return slice(splits.test); }
  std::span<const WindowedSample> slice(IndexRange r) const {
    return std::span<const WindowedSample>(samples).subspan(r.begin, r.size());
  }

  /// Rows covered by the training samples.
  std::span<const HourlyDistrictRow> training_rows() const;

  /// Same windows normalized with other parameters.
  std::vector<WindowedSample> materialize(const NormalizationParams& norm) const;
};

/// Builds the dataset for one district's rows (any order; sorted here).
PreparedDataset prepare_dataset(std::vector<HourlyDistrictRow> rows, std::string district,
                                const DatasetOptions& options = {});

struct SynthParams {
  std::uint64_t seed = 1;
  int days = 120;
  double base = 10000.0;
  double daily_amplitude = 0.5;   // a
  double phase = -2.0;            // phi, radians
  double weekday_amplitude = 0.2;  // b; weekday_factor is +1 Mon-Fri, -1 Sat-Sun
  double precip_effect = -800.0;  // c, vehicles per unit of precipitation
  double noise_sd = 0.03;         // Gaussian noise, as a fraction of base
  std::string district = "TUZLA";
  Hour start = Hour{std::chrono::sys_days{std::chrono::year{2020} / 6 / 1}};
};

/// Hourly synthetic district series:
///   vehicles = base * (1 + a sin(2 pi hour / 24 + phi) + b weekday_factor)
///              + c * precipitation + noise,
/// clamped at 0, with plausible weather and speed columns. Deterministic per
/// seed.
std::vector<HourlyDistrictRow> synth_series(const SynthParams& params);

}  // namespace smartjourney
