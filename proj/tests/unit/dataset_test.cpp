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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "smartjourney/dataset.hpp"
#include "smartjourney/error.hpp"

namespace sj = smartjourney;

namespace {

std::vector<sj::HourlyDistrictRow> hourly(std::size_t n, std::int64_t start_value = 0) {
  std::vector<sj::HourlyDistrictRow> rows(n);
  const auto t0 = *sj::make_hour(2020, 1, 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].timestamp = t0 + std::chrono::hours{static_cast<long>(i)};
    rows[i].district = "TUZLA";
    rows[i].num_vehicles = start_value + static_cast<std::int64_t>(i);
    rows[i].weather = sj::WeatherFeatures{10.0 + static_cast<double>(i % 7), 5.0, 90.0, 2.0, 0.0};
  }
  return rows;
}

double autocorrelation(const std::vector<double>& x, std::size_t lag) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + lag < x.size()) num += (x[i] - mean) * (x[i + lag] - mean);
  }
  return num / den;
}

}  // namespace

TEST(Normalization, MapsRangeToUnitInterval) {
  sj::NormalizationParams n({"a", "b"}, {{0.0, 10.0}, {7.0, 7.0}});
  EXPECT_EQ(n.apply(0, 5.0), 0.5);
  EXPECT_EQ(n.apply(0, 0.0), 0.0);
  EXPECT_EQ(n.apply(0, 10.0), 1.0);
  for (double v : {7.0, 7.0, 7.0}) EXPECT_EQ(n.apply(1, v), 0.0);
}

TEST(Normalization, ApplyInvertRoundTrip) {
  sj::NormalizationParams n({"a"}, {{-3.5, 12000.25}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.5, 12000.25);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_NEAR(n.invert(0, n.apply(0, v)), v, 1e-12 * std::max(1.0, std::abs(v)));
  }
}

TEST(Normalization, FitReadsEveryFeature) {
  const auto rows = hourly(10, 100);
  const auto n = sj::fit_normalization(rows);
  ASSERT_EQ(n.size(), sj::kModelFeatures.size());
  EXPECT_EQ(n.names()[0], "NUMBER_OF_VEHICLES");
  EXPECT_EQ(n.ranges()[0].min, 100);
  EXPECT_EQ(n.ranges()[0].max, 109);
  EXPECT_EQ(n.ranges()[1].min, 10);
  EXPECT_EQ(n.ranges()[1].max, 16);
  EXPECT_THROW(sj::fit_normalization({}), sj::Error);
}

TEST(Windows, CountFormula) {
  const auto n = sj::fit_normalization(hourly(200));
  EXPECT_EQ(sj::make_windows(hourly(25), 24, n).size(), 1u);
  EXPECT_TRUE(sj::make_windows(hourly(24), 24, n).empty());

  const auto rows = hourly(100);
  const auto samples = sj::make_windows(rows, 24, n);
  ASSERT_EQ(samples.size(), 76u);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(samples[i].target_timestamp, rows[24 + i].timestamp);
    EXPECT_EQ(samples[i].target, n.apply(0, static_cast<double>(rows[24 + i].num_vehicles)));
    EXPECT_EQ(samples[i].inputs.rows(), 24);
    EXPECT_EQ(samples[i].inputs.cols(), 6);
    // Last input row is the hour before the target; the target is never an input.
    EXPECT_EQ(samples[i].inputs(23, 0), n.apply(0, static_cast<double>(rows[23 + i].num_vehicles)));
  }

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t w = 1 + rng() % 30, count = w + 1 + rng() % 80;
    EXPECT_EQ(sj::window_starts(hourly(count), w).size(), count - w);
  }
}

TEST(Windows, NoWindowCrossesAGap) {
  auto rows = hourly(60);
  rows.erase(rows.begin() + 30);
  const auto starts = sj::window_starts(rows, 24);
  // Runs are 30 and 29 rows long: 6 + 5 windows.
  EXPECT_EQ(starts.size(), 11u);
  for (std::size_t s : starts) {
    EXPECT_EQ(rows[s + 24].timestamp - rows[s].timestamp, std::chrono::hours{24});
  }
}

TEST(Split, FloorAndRemainder) {
  auto check = [](std::size_t n, std::size_t tr, std::size_t va, std::size_t te) {
    const auto s = sj::chrono_split(n);
    EXPECT_EQ(s.train.size(), tr) << n;
    EXPECT_EQ(s.validation.size(), va) << n;
    EXPECT_EQ(s.test.size(), te) << n;
    EXPECT_EQ(s.train.end, s.validation.begin);
    EXPECT_EQ(s.validation.end, s.test.begin);
    EXPECT_EQ(s.test.end, n);
  };
  check(100, 70, 15, 15);
  check(10, 7, 1, 2);
  EXPECT_THROW(sj::chrono_split(2), sj::Error);
  EXPECT_THROW(sj::chrono_split(10, {0.5, 0.5, 0.5}), sj::Error);
}

TEST(PreparedDataset, SplitsAreChronological) {
  sj::SynthParams p;
  p.days = 20;
  const auto ds = sj::prepare_dataset(sj::synth_series(p), "TUZLA");
  ASSERT_FALSE(ds.test().empty());
  EXPECT_LT(ds.train().back().target_timestamp, ds.validation().front().target_timestamp);
  EXPECT_LT(ds.validation().back().target_timestamp, ds.test().front().target_timestamp);
  EXPECT_EQ(ds.samples.size(), 20u * 24u - 24u);
}

TEST(PreparedDataset, NormalizationIgnoresValidationAndTestRows) {
  sj::SynthParams p;
  p.days = 20;
  auto rows = sj::synth_series(p);
  const auto base = sj::prepare_dataset(rows, "TUZLA");
  const std::size_t cut = base.training_rows().size();
  for (std::size_t i = cut; i < rows.size(); ++i) {
    rows[i].num_vehicles *= 50;
    rows[i].weather->t2m = -40.0;
  }
  const auto altered = sj::prepare_dataset(rows, "TUZLA");
  EXPECT_EQ(altered.normalization, base.normalization);
  // Training rows cover exactly the inputs and targets of the training samples.
  EXPECT_EQ(base.training_rows().back().timestamp, base.train().back().target_timestamp);
}

TEST(Synth, DeterministicPerSeed) {
  sj::SynthParams p;
  p.days = 10;
  EXPECT_EQ(sj::synth_series(p), sj::synth_series(p));
  sj::SynthParams q = p;
  q.seed = 2;
  EXPECT_NE(sj::synth_series(p), sj::synth_series(q));
  for (const auto& r : sj::synth_series(p)) EXPECT_GE(r.num_vehicles, 0);
}

TEST(Synth, DegenerateParametersGiveConstantSeries) {
  sj::SynthParams p;
  p.days = 4;
  p.daily_amplitude = 0;
  p.weekday_amplitude = 0;
  p.precip_effect = 0;
  p.noise_sd = 0;
  for (const auto& r : sj::synth_series(p)) EXPECT_EQ(r.num_vehicles, 10000);
}

TEST(Synth, DailyCycleDominates) {
  sj::SynthParams p;
  p.days = 60;
  std::vector<double> v;
  for (const auto& r : sj::synth_series(p)) v.push_back(static_cast<double>(r.num_vehicles));
  EXPECT_GT(autocorrelation(v, 24), autocorrelation(v, 13));
}
