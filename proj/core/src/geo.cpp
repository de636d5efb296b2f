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

#include "smartjourney/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smartjourney/error.hpp"

namespace smartjourney {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

bool is_valid(LatLon point) {
  return std::isfinite(point.latitude) && std::isfinite(point.longitude) &&
         point.latitude >= -90.0 && point.latitude <= 90.0 && point.longitude >= -180.0 &&
         point.longitude <= 180.0;
}

double haversine_km(LatLon a, LatLon b) {
  // Differences are taken as absolute values and the cosine product is
  // commutative, so swapping a and b reproduces the same bits.
  const double phi_a = a.latitude * kDegToRad;
  const double phi_b = b.latitude * kDegToRad;
  const double half_dphi = std::abs(a.latitude - b.latitude) * kDegToRad * 0.5;
  const double half_dlambda = std::abs(a.longitude - b.longitude) * kDegToRad * 0.5;
  const double s_phi = std::sin(half_dphi);
  const double s_lambda = std::sin(half_dlambda);
  double h = s_phi * s_phi + std::cos(phi_a) * std::cos(phi_b) * s_lambda * s_lambda;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthMeanRadiusKm * std::asin(std::sqrt(h));
}

const std::vector<District>& default_districts() {
  static const std::vector<District> registry = {
      {"TUZLA", {40.8457, 29.3584}},
      {"BAGCILAR", {41.0356, 28.8534}},
      {"BUYUK_CEKMECE", {41.0223, 28.5749}},
      {"ATASEHIR", {40.9937, 29.1388}},
      {"KAGITHANE", {41.0822, 28.9862}},
      {"FATIH", {41.0151, 28.9551}},
  };
  return registry;
}

std::size_t nearest_district(LatLon point, std::span<const District> registry) {
  if (registry.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "district registry is empty");
  }
  std::size_t best = 0;
  double best_distance = haversine_km(point, registry[0].location);
  for (std::size_t i = 1; i < registry.size(); ++i) {
    const double d = haversine_km(point, registry[i].location);
    if (d < best_distance) {
      best = i;
      best_distance = d;
    }
  }
  return best;
}

const std::string& assign_district(LatLon point, std::span<const District> registry) {
  return registry[nearest_district(point, registry)].name;
}

const District* find_district(std::span<const District> registry, std::string_view name) {
  auto it = std::find_if(registry.begin(), registry.end(),
                         [&](const District& d) { return d.name == name; });
  return it == registry.end() ? nullptr : &*it;
}

}  // namespace smartjourney
