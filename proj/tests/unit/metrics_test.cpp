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
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "smartjourney/error.hpp"
#include "smartjourney/metrics.hpp"

namespace sj = smartjourney;

namespace {

void expect_rel(double got, double want, double tol = 1e-12) {
  EXPECT_LE(std::abs(got - want), tol * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

}  // namespace

TEST(Metrics, WorkedExample) {
  const auto r = sj::compute_metrics(std::vector<double>{100, 200}, std::vector<double>{90, 220});
  ASSERT_TRUE(r.mape_percent);
  EXPECT_DOUBLE_EQ(*r.mape_percent, 10.0);
  EXPECT_DOUBLE_EQ(r.mae, 15.0);
  EXPECT_NEAR(r.rmse, 15.81138830084189666, 1e-12);
  EXPECT_EQ(r.excluded_count, 0u);
}

TEST(Metrics, PerfectPrediction) {
  const std::vector<double> a{3, 5, 8};
  const auto r = sj::compute_metrics(a, a);
  EXPECT_EQ(*r.mape_percent, 0.0);
  EXPECT_EQ(r.mae, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
}

TEST(Metrics, FloorExcludesSmallActuals) {
  const auto r = sj::compute_metrics(std::vector<double>{0.5, 100}, std::vector<double>{1, 100}, 1.0);
  EXPECT_EQ(*r.mape_percent, 0.0);
  EXPECT_EQ(r.excluded_count, 1u);
  EXPECT_DOUBLE_EQ(r.mae, 0.25);

  const auto none = sj::compute_metrics(std::vector<double>{0.5, 0.2}, std::vector<double>{1, 1}, 1.0);
  EXPECT_FALSE(none.mape_percent);
  EXPECT_EQ(none.excluded_count, 2u);

  // Floor 0 keeps strict behaviour but still drops exact zeros.
  const auto strict = sj::compute_metrics(std::vector<double>{0.5, 0.0}, std::vector<double>{1, 1}, 0.0);
  EXPECT_DOUBLE_EQ(*strict.mape_percent, 100.0);
  EXPECT_EQ(strict.excluded_count, 1u);
}

TEST(Metrics, RejectsBadInput) {
  EXPECT_THROW(sj::compute_metrics(std::vector<double>{}, std::vector<double>{}), sj::Error);
  EXPECT_THROW(sj::compute_metrics(std::vector<double>{1}, std::vector<double>{1, 2}), sj::Error);
}

TEST(Metrics, NormalizedAndRawPairing) {
  const std::vector<double> an{0.1, 0.5}, pn{0.2, 0.5}, ar{100, 200}, pr{90, 220};
  const auto r = sj::compute_metrics(an, pn, ar, pr);
  EXPECT_DOUBLE_EQ(*r.mape_percent, 10.0);
  EXPECT_DOUBLE_EQ(r.mae, 0.05);
  EXPECT_DOUBLE_EQ(r.rmse, std::sqrt(0.005));
}

TEST(Metrics, MatchesFrozenOracleVectors) {
  std::ifstream in(std::string(SMARTJOURNEY_ORACLE_DIR) + "/metric_vectors.json");
  ASSERT_TRUE(in) << "oracle file missing";
  const auto cases = nlohmann::json::parse(in);
  ASSERT_EQ(cases.size(), 100u);
  for (const auto& c : cases) {
    const auto a = c.at("actual").get<std::vector<double>>();
    const auto p = c.at("predicted").get<std::vector<double>>();
    const auto r = sj::compute_metrics(a, p, c.at("floor").get<double>());
    const auto& e = c.at("expected");
    expect_rel(r.mae, e.at("mae").get<double>());
    expect_rel(r.rmse, e.at("rmse").get<double>());
    EXPECT_EQ(r.excluded_count, e.at("excluded_count").get<std::size_t>());
    if (e.at("mape_percent").is_null()) {
      EXPECT_FALSE(r.mape_percent);
    } else {
      ASSERT_TRUE(r.mape_percent);
      expect_rel(*r.mape_percent, e.at("mape_percent").get<double>());
    }
  }
}

TEST(Metrics, ScalingAndPowerMeanProperties) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(1, 500), s(0.1, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> a(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      p[i] = u(rng);
    }
    const auto r = sj::compute_metrics(a, p, 0.0);
    EXPECT_GE(r.rmse, r.mae * (1 - 1e-15));
    EXPECT_GE(r.mae, 0.0);

    const double k = s(rng);
    std::vector<double> ak(a), pk(p);
    for (auto& v : ak) v *= k;
    for (auto& v : pk) v *= k;
    const auto rk = sj::compute_metrics(ak, pk, 0.0);
    expect_rel(*rk.mape_percent, *r.mape_percent, 1e-10);
    expect_rel(rk.mae, k * r.mae, 1e-10);
    expect_rel(rk.rmse, k * r.rmse, 1e-10);
  }
}

TEST(Metrics, JsonRoundTrip) {
  sj::MetricReport r{12.5, 0.1, 0.2, 3};
  const auto j = sj::metrics_to_json(r);
  EXPECT_EQ(j.at("mape_percent"), 12.5);
  EXPECT_EQ(j.at("excluded_count"), 3);
  EXPECT_EQ(sj::metrics_from_json(j), r);
  r.mape_percent.reset();
  EXPECT_TRUE(sj::metrics_to_json(r).at("mape_percent").is_null());
  EXPECT_EQ(sj::metrics_from_json(sj::metrics_to_json(r)), r);
  EXPECT_THROW(sj::metrics_from_json(nlohmann::json{{"mae", "x"}}), sj::Error);
}
