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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace smartjourney {

/// A calendar date-time truncated to the hour. Dataset timestamps carry no
/// time zone; they are treated as naive local hours throughout.
using Hour = std::chrono::sys_time<std::chrono::hours>;

/// Builds an hour from calendar fields, or nullopt for an invalid combination
/// (month 13, February 30, hour 24, ...).
std::optional<Hour> make_hour(int year, int month, int day, int hour);

/// Accepts "YYYY-MM-DD HH:MM:SS", "YYYY-MM-DDTHH:MM:SS", "YYYY-MM-DDTHH:MM",
/// "YYYY-MM-DDTHH" and "YYYY-MM-DD" (midnight), with an optional trailing 'Z'.
/// Minutes and seconds are floored away.
std::optional<Hour> parse_hour(std::string_view text);

/// "YYYY-MM-DD HH:00:00", the prepared-CSV format.
std::string format_hour(Hour hour);

/// "YYYY-MM-DDTHH:00:00", the API format.
std::string format_hour_iso(Hour hour);

int hour_of_day(Hour hour);

/// 0 = Monday ... 6 = Sunday.
int day_of_week(Hour hour);

}  // namespace smartjourney
