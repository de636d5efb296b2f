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

#include "smartjourney/time.hpp"

namespace sj = smartjourney;

TEST(Time, ParsesEveryAcceptedForm) {
  const auto expected = sj::make_hour(2020, 3, 4, 5);
  ASSERT_TRUE(expected);
  for (const char* text : {"2020-03-04 05:00:00", "2020-03-04T05:00:00", "2020-03-04T05:00",
                           "2020-03-04T05", "2020-03-04T05:00:00Z", "2020-03-04 05:59:59"}) {
    EXPECT_EQ(sj::parse_hour(text), expected) << text;
  }
  EXPECT_EQ(sj::parse_hour("2020-03-04"), sj::make_hour(2020, 3, 4, 0));
}

TEST(Time, RejectsMalformedInput) {
  for (const char* text : {"", "2020-13-01", "2020-02-30 00:00:00", "2020-01-01 24:00:00",
                           "2020/01/01", "2020-01-01X05", "2020-01-01 05:61:00", "yesterday"}) {
    EXPECT_FALSE(sj::parse_hour(text)) << text;
  }
}

TEST(Time, FormatsRoundTrip) {
  const auto h = *sj::make_hour(2021, 12, 31, 23);
  EXPECT_EQ(sj::format_hour(h), "2021-12-31 23:00:00");
  EXPECT_EQ(sj::format_hour_iso(h), "2021-12-31T23:00:00");
  EXPECT_EQ(sj::parse_hour(sj::format_hour(h)), h);
  EXPECT_EQ(sj::parse_hour(sj::format_hour_iso(h)), h);
}

TEST(Time, CalendarFields) {
  // 2020-06-01 was a Monday.
  const auto monday = *sj::make_hour(2020, 6, 1, 7);
  EXPECT_EQ(sj::day_of_week(monday), 0);
  EXPECT_EQ(sj::hour_of_day(monday), 7);
  EXPECT_EQ(sj::day_of_week(*sj::make_hour(2020, 6, 7, 0)), 6);
  EXPECT_FALSE(sj::make_hour(2021, 2, 29, 0));
  EXPECT_TRUE(sj::make_hour(2020, 2, 29, 0));
}
