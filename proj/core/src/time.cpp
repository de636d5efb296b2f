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

#include "smartjourney/time.hpp"

#include <charconv>
#include <cstdio>

namespace smartjourney {
namespace {

using namespace std::chrono;

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::optional<Hour> make_hour(int year, int month, int day, int hour) {
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 0 || hour > 23) {
    return std::nullopt;
  }
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  return Hour{sys_days{ymd}} + hours{hour};
}

std::optional<Hour> parse_hour(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);

  int year = 0, month = 0, day = 0, hour = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!read_int(text, 0, 4, year) || !read_int(text, 5, 2, month) || !read_int(text, 8, 2, day)) {
    return std::nullopt;
  }
  if (text.size() > 10) {
    if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
    if (!read_int(text, 11, 2, hour)) return std::nullopt;
    // Optional ":MM" and ":MM:SS" tails; validated, then floored.
    int minute = 0, second = 0;
    if (text.size() == 13) {
    } else if (text.size() == 16 && text[13] == ':') {
      if (!read_int(text, 14, 2, minute)) return std::nullopt;
    } else if (text.size() == 19 && text[13] == ':' && text[16] == ':') {
      if (!read_int(text, 14, 2, minute) || !read_int(text, 17, 2, second)) return std::nullopt;
    } else {
      return std::nullopt;
    }
    if (minute < 0 || minute > 59 || second < 0 || second > 60) return std::nullopt;
  }
  return make_hour(year, month, day, hour);
}

namespace {

std::string format_with(Hour hour, char separator) {
  const auto day_point = floor<days>(hour);
  const year_month_day ymd{day_point};
  const auto h = (hour - day_point).count();
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u%c%02d:00:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), separator,
                static_cast<int>(h));
  return buffer;
}

}  // namespace

std::string format_hour(Hour hour) { return format_with(hour, ' '); }

std::string format_hour_iso(Hour hour) { return format_with(hour, 'T'); }

int hour_of_day(Hour hour) {
  return static_cast<int>((hour - floor<days>(hour)).count());
}

int day_of_week(Hour hour) {
  const weekday wd{floor<days>(hour)};
  return static_cast<int>(wd.iso_encoding()) - 1;
}

}  // namespace smartjourney
