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

#include "smartjourney/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "csv.hpp"
#include "smartjourney/error.hpp"

namespace smartjourney {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

using ColumnIndex = std::unordered_map<std::string, std::size_t>;

ColumnIndex index_header(const std::vector<std::string>& header) {
  ColumnIndex index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    index.emplace(csv::normalize_header(header[i]), i);
  }
  return index;
}

std::optional<std::size_t> column(const ColumnIndex& index, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
  }
  return std::nullopt;
}

struct TrafficColumns {
  std::size_t id, date_time, longitude, latitude, geohash, min_speed, max_speed, avg_speed, vehicles;
};

TrafficColumns traffic_columns(const std::vector<std::string>& header) {
  const ColumnIndex index = index_header(header);
  auto require = [&](std::initializer_list<const char*> names) {
    auto c = column(index, names);
    if (!c) throw Error(ErrorCode::kSchema, std::string("traffic header lacks column ") + *names.begin());
    return *c;
  };
  TrafficColumns cols{require({"_ID"}),           require({"DATE_TIME"}),
                      require({"LONGITUDE"}),     require({"LATITUDE"}),
                      require({"GEOHASH", "GEHASH"}), require({"MINIMUM_SPEED"}),
                      require({"MAXIMUM_SPEED"}), require({"AVERAGE_SPEED"}),
                      require({"NUMBER_OF_VEHICLES"})};
  // A leading unnamed pandas index column is tolerated; any other extra
  // column means this is not a traffic export.
  std::size_t named = 0;
  for (const auto& h : header) {
    if (!csv::normalize_header(h).empty()) ++named;
  }
  if (named != 9) throw Error(ErrorCode::kSchema, "traffic header must have exactly 9 named columns");
  return cols;
}

std::optional<TrafficRecord> parse_traffic_row(const std::vector<std::string>& f,
                                               const TrafficColumns& c, std::size_t width) {
  if (f.size() != width) return std::nullopt;
  TrafficRecord r;
  auto id = csv::to_int(f[c.id]);
  auto ts = parse_hour(f[c.date_time]);
  auto lon = csv::to_double(f[c.longitude]);
  auto lat = csv::to_double(f[c.latitude]);
  auto min_speed = csv::to_double(f[c.min_speed]);
  auto max_speed = csv::to_double(f[c.max_speed]);
  auto avg_speed = csv::to_double(f[c.avg_speed]);
  auto vehicles = csv::to_int(f[c.vehicles]);
  if (!id || !ts || !lon || !lat || !min_speed || !max_speed || !avg_speed || !vehicles) {
    return std::nullopt;
  }
  r.row_id = *id;
  r.timestamp = *ts;
  r.position = {*lat, *lon};
  r.geohash = f[c.geohash];
  r.min_speed = *min_speed;
  r.max_speed = *max_speed;
  r.avg_speed = *avg_speed;
  r.num_vehicles = *vehicles;
  if (!is_valid(r.position) || r.num_vehicles < 0) return std::nullopt;
  if (!(r.min_speed <= r.avg_speed && r.avg_speed <= r.max_speed)) return std::nullopt;
  return r;
}

struct WeatherColumns {
  std::size_t year, month, day, hour;
  std::array<std::size_t, 5> features;  // T2M, QV2M, WD, WS, PRECIP
  std::optional<std::size_t> latitude, longitude, name;
};

WeatherColumns weather_columns(const std::vector<std::string>& header) {
  const ColumnIndex index = index_header(header);
  auto require = [&](std::initializer_list<const char*> names) {
    auto c = column(index, names);
    if (!c) throw Error(ErrorCode::kSchema, std::string("weather header lacks column ") + *names.begin());
    return *c;
  };
  WeatherColumns cols{require({"YEAR"}), require({"MO"}), require({"DY"}), require({"HR"}),
                      {require({"T2M"}), require({"QV2M"}), require({"WD2M", "WD10M"}),
                       require({"WS2M", "WS10M"}), require({"PRECTOTCORR", "PRECOTCORR"})},
                      column(index, {"LATITUDE", "LAT"}), column(index, {"LONGITUDE", "LON"}),
                      column(index, {"LOC_NAME", "DISTANCE_LOC", "DISTRICT"})};
  if (!cols.name && !(cols.latitude && cols.longitude)) {
    throw Error(ErrorCode::kSchema, "weather header needs LOC_NAME or LATITUDE/LONGITUDE");
  }
  return cols;
}

struct RawWeatherRow {
  Hour timestamp;
  std::array<double, 5> values;
  LatLon position;
  std::string district;
};

constexpr double kFillValue = -999.0;

}  // namespace

TrafficParseResult parse_traffic_csv(std::istream& in) {
  TrafficParseResult result;
  std::string line;
  if (!csv::next_line(in, line)) throw Error(ErrorCode::kSchema, "traffic file has no header");
  const auto header = csv::split_line(line);
  const TrafficColumns cols = traffic_columns(header);
  while (csv::next_line(in, line)) {
    if (auto record = parse_traffic_row(csv::split_line(line), cols, header.size())) {
      result.records.push_back(std::move(*record));
    } else {
      ++result.skipped;
    }
  }
  return result;
}

TrafficParseResult parse_traffic_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_traffic_csv(in);
}

WeatherParseResult parse_weather_csv(std::istream& in, WeatherScaling scaling,
                                     std::span<const District> registry) {
  WeatherParseResult result;
  std::string line;
  if (!csv::next_line(in, line)) throw Error(ErrorCode::kSchema, "weather file has no header");
  const auto header = csv::split_line(line);
  const WeatherColumns cols = weather_columns(header);

  std::vector<RawWeatherRow> raw;
  while (csv::next_line(in, line)) {
    const auto f = csv::split_line(line);
    if (f.size() != header.size()) {
      ++result.skipped;
      continue;
    }
    auto year = csv::to_int(f[cols.year]);
    auto month = csv::to_int(f[cols.month]);
    auto day = csv::to_int(f[cols.day]);
    auto hour = csv::to_int(f[cols.hour]);
    std::optional<Hour> ts;
    if (year && month && day && hour) {
      ts = make_hour(static_cast<int>(*year), static_cast<int>(*month), static_cast<int>(*day),
                     static_cast<int>(*hour));
    }
    RawWeatherRow row{};
    bool ok = ts.has_value();
    for (std::size_t k = 0; ok && k < 5; ++k) {
      auto v = csv::to_double(f[cols.features[k]]);
      ok = v.has_value() && *v > kFillValue;
      if (ok) row.values[k] = *v;
    }
    if (ok && row.values[4] < 0.0) ok = false;
    if (ok && cols.latitude && cols.longitude) {
      auto lat = csv::to_double(f[*cols.latitude]);
      auto lon = csv::to_double(f[*cols.longitude]);
      if (lat && lon) row.position = {*lat, *lon};
      ok = lat && lon && is_valid(row.position);
    }
    if (ok) {
      if (cols.name && !f[*cols.name].empty()) {
        row.district = csv::normalize_header(f[*cols.name]);
      } else if (cols.latitude && cols.longitude) {
        row.district = assign_district(row.position, registry);
      } else {
        ok = false;
      }
    }
    if (!ok) {
      ++result.skipped;
      continue;
    }
    row.timestamp = *ts;
    raw.push_back(std::move(row));
  }

  if (scaling.divisors) {
    result.divisors = *scaling.divisors;
  } else {
    const bool integer_encoded =
        std::any_of(raw.begin(), raw.end(), [](const RawWeatherRow& r) { return r.values[0] > 100.0; });
    result.divisors.fill(integer_encoded ? 100.0 : 1.0);
  }

  result.records.reserve(raw.size());
  for (auto& r : raw) {
    WeatherRecord w;
    w.timestamp = r.timestamp;
    w.position = r.position;
    w.district = std::move(r.district);
    w.features.t2m = r.values[0] / result.divisors[0];
    w.features.qv2m = r.values[1] / result.divisors[1];
    double wd = std::fmod(r.values[2] / result.divisors[2], 360.0);
    if (wd < 0.0) wd += 360.0;
    if (wd >= 360.0) wd = 0.0;
    w.features.wind_direction = wd;
    w.features.wind_speed = r.values[3] / result.divisors[3];
    w.features.precipitation = r.values[4] / result.divisors[4];
    result.records.push_back(std::move(w));
  }
  return result;
}

WeatherParseResult parse_weather_csv(const std::filesystem::path& path, WeatherScaling scaling,
                                     std::span<const District> registry) {
  auto in = open_input(path);
  return parse_weather_csv(in, scaling, registry);
}

std::vector<HourlyDistrictRow> aggregate_hourly(std::span<const TrafficRecord> records,
                                                std::span<const District> registry) {
  struct Group {
    std::int64_t vehicles = 0;
    double min_speed = 0.0;
    double max_speed = 0.0;
    double weighted_speed = 0.0;
    double plain_speed = 0.0;
    std::size_t count = 0;
  };
  // Keyed by registry index so the map order is (timestamp, index); names are
  // sorted afterwards within each hour.
  std::map<std::pair<Hour, std::size_t>, Group> groups;
  for (const auto& r : records) {
    const std::size_t district = nearest_district(r.position, registry);
    Group& g = groups[{r.timestamp, district}];
    if (g.count == 0) {
      g.min_speed = r.min_speed;
      g.max_speed = r.max_speed;
    } else {
      g.min_speed = std::min(g.min_speed, r.min_speed);
      g.max_speed = std::max(g.max_speed, r.max_speed);
    }
    g.vehicles += r.num_vehicles;
    g.weighted_speed += static_cast<double>(r.num_vehicles) * r.avg_speed;
    g.plain_speed += r.avg_speed;
    ++g.count;
  }

  std::vector<HourlyDistrictRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, g] : groups) {
    HourlyDistrictRow row;
    row.timestamp = key.first;
    row.district = registry[key.second].name;
    row.min_speed = g.min_speed;
    row.max_speed = g.max_speed;
    row.num_vehicles = g.vehicles;
    const double mean = g.vehicles > 0 ? g.weighted_speed / static_cast<double>(g.vehicles)
                                       : g.plain_speed / static_cast<double>(g.count);
    // Rounding in the weighted sum can step one ulp outside the bounds.
    row.avg_speed = std::clamp(mean, g.min_speed, g.max_speed);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.timestamp, a.district) < std::tie(b.timestamp, b.district);
  });
  return rows;
}

JoinResult join_weather(std::span<const HourlyDistrictRow> rows,
                        std::span<const WeatherRecord> weather) {
  std::map<std::pair<Hour, std::string>, const WeatherRecord*> index;
  for (const auto& w : weather) index.try_emplace({w.timestamp, w.district}, &w);

  JoinResult result;
  result.rows.reserve(rows.size());
  for (const auto& row : rows) {
    auto it = index.find({row.timestamp, row.district});
    if (it == index.end()) {
      ++result.dropped;
      continue;
    }
    HourlyDistrictRow joined = row;
    joined.weather = it->second->features;
    result.rows.push_back(std::move(joined));
  }
  return result;
}

std::map<std::string, std::size_t> district_counts(std::span<const TrafficRecord> records,
                                                   std::span<const District> registry) {
  std::vector<std::size_t> counts(registry.size(), 0);
  for (const auto& r : records) ++counts[nearest_district(r.position, registry)];
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (counts[i] > 0) out[registry[i].name] += counts[i];
  }
  return out;
}

PeriodSummary period_summary(std::span<const TrafficRecord> records, HourWindow morning,
                             HourWindow afternoon) {
  PeriodSummary summary;
  double morning_speed = 0.0;
  double afternoon_speed = 0.0;
  for (const auto& r : records) {
    const int h = hour_of_day(r.timestamp);
    if (morning.contains(h)) {
      summary.morning.total_vehicles += r.num_vehicles;
      morning_speed += r.avg_speed;
      ++summary.morning.record_count;
    } else if (afternoon.contains(h)) {
      summary.afternoon.total_vehicles += r.num_vehicles;
      afternoon_speed += r.avg_speed;
      ++summary.afternoon.record_count;
    }
  }
  if (summary.morning.record_count > 0) {
    summary.morning.mean_avg_speed = morning_speed / static_cast<double>(summary.morning.record_count);
  }
  if (summary.afternoon.record_count > 0) {
    summary.afternoon.mean_avg_speed =
        afternoon_speed / static_cast<double>(summary.afternoon.record_count);
  }
  return summary;
}

void write_prepared_csv(std::ostream& out, std::span<const HourlyDistrictRow> rows) {
  out << kPreparedHeader << '\n';
  for (const auto& r : rows) {
    if (!r.weather) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prepared row " + format_hour(r.timestamp) + " " + r.district + " has no weather");
    }
    const WeatherFeatures& w = *r.weather;
    out << format_hour(r.timestamp) << ',' << r.district << ',' << csv::format_double(r.min_speed)
        << ',' << csv::format_double(r.max_speed) << ',' << csv::format_double(r.avg_speed) << ','
        << r.num_vehicles << ',' << csv::format_double(w.t2m) << ',' << csv::format_double(w.qv2m)
        << ',' << csv::format_double(w.wind_direction) << ',' << csv::format_double(w.wind_speed)
        << ',' << csv::format_double(w.precipitation) << '\n';
  }
}

void write_prepared_csv(const std::filesystem::path& path, std::span<const HourlyDistrictRow> rows) {
  std::ostringstream buffer;
  write_prepared_csv(buffer, rows);
  // Write-then-rename so a failure never leaves a partial file behind.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << buffer.str();
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<HourlyDistrictRow> read_prepared_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line)) throw Error(ErrorCode::kSchema, "prepared file has no header");
  const auto header = csv::split_line(line);
  const ColumnIndex index = index_header(header);
  std::array<std::size_t, 11> cols{};
  const char* names[11] = {"DATE_TIME", "DISTANCE_LOC", "MINIMUM_SPEED", "MAXIMUM_SPEED",
                           "AVERAGE_SPEED", "NUMBER_OF_VEHICLES", "T2M", "QV2M", "WD2M", "WS2M",
                           "PRECTOTCORR"};
  for (std::size_t i = 0; i < 11; ++i) {
    auto c = column(index, {names[i]});
    if (i == 8 && !c) c = column(index, {"WD10M"});
    if (i == 9 && !c) c = column(index, {"WS10M"});
    if (!c) throw Error(ErrorCode::kSchema, std::string("prepared header lacks ") + names[i]);
    cols[i] = *c;
  }

  std::vector<HourlyDistrictRow> rows;
  std::size_t line_number = 1;
  while (csv::next_line(in, line)) {
    ++line_number;
    const auto f = csv::split_line(line);
    auto fail = [&] {
      return Error(ErrorCode::kSchema, "malformed prepared row at line " + std::to_string(line_number));
    };
    if (f.size() != header.size()) throw fail();
    HourlyDistrictRow r;
    auto ts = parse_hour(f[cols[0]]);
    auto vehicles = csv::to_int(f[cols[5]]);
    std::array<std::optional<double>, 8> v{
        csv::to_double(f[cols[2]]), csv::to_double(f[cols[3]]), csv::to_double(f[cols[4]]),
        csv::to_double(f[cols[6]]), csv::to_double(f[cols[7]]), csv::to_double(f[cols[8]]),
        csv::to_double(f[cols[9]]), csv::to_double(f[cols[10]])};
    if (!ts || !vehicles || f[cols[1]].empty() ||
        std::any_of(v.begin(), v.end(), [](const auto& x) { return !x.has_value(); })) {
      throw fail();
    }
    r.timestamp = *ts;
    r.district = f[cols[1]];
    r.min_speed = *v[0];
    r.max_speed = *v[1];
    r.avg_speed = *v[2];
    r.num_vehicles = *vehicles;
    r.weather = WeatherFeatures{*v[3], *v[4], *v[5], *v[6], *v[7]};
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<HourlyDistrictRow> read_prepared_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_prepared_csv(in);
}

std::vector<HourlyDistrictRow> rows_for_district(std::span<const HourlyDistrictRow> rows,
                                                 std::string_view district) {
  std::vector<HourlyDistrictRow> out;
  for (const auto& r : rows) {
    if (r.district == district) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return out;
}

}  // namespace smartjourney
