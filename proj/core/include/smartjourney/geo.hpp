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

namespace smartjourney {

struct LatLon {
  double latitude = 0.0;
  double longitude = 0.0;
};

bool is_valid(LatLon point);

/// Mean Earth radius (IUGG), kilometres.
inline constexpr double kEarthMeanRadiusKm = 6371.0088;

/// Great-circle distance by the haversine formula. Exactly symmetric in its
/// arguments.
double haversine_km(LatLon a, LatLon b);

struct District {
  std::string name;
  LatLon location;
};

/// The six reference districts used as aggregation centroids.
const std::vector<District>& default_districts();

/// Index of the registry entry closest to `point`. Equal distances resolve to
/// the earlier entry. Throws Error(kInvalidArgument) on an empty registry.
std::size_t nearest_district(LatLon point, std::span<const District> registry);

const std::string& assign_district(LatLon point, std::span<const District> registry);

/// Registry lookup by name; nullptr when absent.
const District* find_district(std::span<const District> registry, std::string_view name);

}  // namespace smartjourney
