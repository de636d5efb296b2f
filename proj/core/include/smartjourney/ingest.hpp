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
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "smartjourney/geo.hpp"
#include "smartjourney/records.hpp"

namespace smartjourney {

struct TrafficParseResult {
  std::vector<TrafficRecord> records;
  std::size_t skipped = 0;
};

/// Reads a traffic density export. The header must name the nine expected
/// columns in any order (GEOHASH is also accepted as GEHASH). Rows that fail
/// to parse or violate min <= avg <= max speed are skipped and counted.
/// Throws Error(kIo) when the file cannot be opened and Error(kSchema) for an
/// unrecognised header.
TrafficParseResult parse_traffic_csv(const std::filesystem::path& path);
TrafficParseResult parse_traffic_csv(std::istream& in);

/// Divisors applied to the five weather columns, in the order
/// T2M, QV2M, WD, WS, PRECIP. Without explicit divisors the parser inspects the
/// file: if any T2M exceeds 100 the export is integer-encoded and every column
/// is divided by 100, otherwise values are taken as-is.
struct WeatherScaling {
  std::optional<std::array<double, 5>> divisors;
};

struct WeatherParseResult {
  std::vector<WeatherRecord> records;
  std::size_t skipped = 0;
  std::array<double, 5> divisors{1.0, 1.0, 1.0, 1.0, 1.0};
};

/// Reads an hourly weather export with YEAR, MO, DY, HR, T2M, QV2M, WS2M (or
/// WS10M), WD2M (or WD10M) and PRECTOTCORR columns. LOC_NAME is used as the
/// district when present; otherwise LATITUDE/LONGITUDE are snapped to the
/// nearest registry district. Invalid calendar fields, fill values (-999) and
/// negative precipitation are counted skips.
WeatherParseResult parse_weather_csv(const std::filesystem::path& path, WeatherScaling scaling = {},
                                     std::span<const District> registry = default_districts());
WeatherParseResult parse_weather_csv(std::istream& in, WeatherScaling scaling = {},
                                     std::span<const District> registry = default_districts());

/// Groups records by (hour, nearest district). Vehicles are summed, speeds
/// take the group min/max and the vehicle-weighted mean of avg_speed (plain
/// mean when the group counts zero vehicles). Rows are ordered by timestamp,
/// then district name. Weather is left unset.
std::vector<HourlyDistrictRow> aggregate_hourly(std::span<const TrafficRecord> records,
                                                std::span<const District> registry);

struct JoinResult {
  std::vector<HourlyDistrictRow> rows;
  std::size_t dropped = 0;
};

/// Exact (hour, district) join. Traffic rows without weather are dropped and
/// counted. When the weather input repeats a key the first record wins.
JoinResult join_weather(std::span<const HourlyDistrictRow> rows,
                        std::span<const WeatherRecord> weather);

std::map<std::string, std::size_t> district_counts(std::span<const TrafficRecord> records,
                                                   std::span<const District> registry);

/// Half-open hour-of-day window [begin, end).
struct HourWindow {
  int begin = 0;
  int end = 0;
  bool contains(int hour) const { return hour >= begin && hour < end; }
};

struct PeriodTotals {
  std::int64_t total_vehicles = 0;
  std::size_t record_count = 0;
  std::optional<double> mean_avg_speed;  // unweighted; empty when no records
};

struct PeriodSummary {
  PeriodTotals morning;
  PeriodTotals afternoon;
};

PeriodSummary period_summary(std::span<const TrafficRecord> records,
                             HourWindow morning = {6, 9}, HourWindow afternoon = {17, 20});

inline constexpr std::string_view kPreparedHeader =
    "DATE_TIME,DISTANCE_LOC,MINIMUM_SPEED,MAXIMUM_SPEED,AVERAGE_SPEED,NUMBER_OF_VEHICLES,"
    "T2M,QV2M,WD2M,WS2M,PRECTOTCORR";

/// Writes the prepared dataset. Every row must carry weather.
void write_prepared_csv(std::ostream& out, std::span<const HourlyDistrictRow> rows);
void write_prepared_csv(const std::filesystem::path& path, std::span<const HourlyDistrictRow> rows);

std::vector<HourlyDistrictRow> read_prepared_csv(std::istream& in);
std::vector<HourlyDistrictRow> read_prepared_csv(const std::filesystem::path& path);

/// Rows of one district, in timestamp order.
std::vector<HourlyDistrictRow> rows_for_district(std::span<const HourlyDistrictRow> rows,
                                                 std::string_view district);

}  // namespace smartjourney
