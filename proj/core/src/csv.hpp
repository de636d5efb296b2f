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

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smartjourney::csv {

/// Splits one CSV line on commas. Double-quoted fields may contain commas;
/// a doubled quote inside quotes is a literal quote. Fields are trimmed.
std::vector<std::string> split_line(std::string_view line);

/// Reads the next non-blank line, stripping a trailing '\r'.
bool next_line(std::istream& in, std::string& line);

std::optional<double> to_double(std::string_view field);
std::optional<long long> to_int(std::string_view field);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Upper-cases ASCII and strips a UTF-8 byte-order mark.
std::string normalize_header(std::string_view name);

}  // namespace smartjourney::csv
