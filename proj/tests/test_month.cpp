// Copyright 2026 The hedgefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hedgefx/month.hpp"

#include <gtest/gtest.h>

namespace hedgefx {
namespace {

TEST(MonthStamp, ArithmeticAndFormatting) {
  const MonthStamp m(2018, 12);
  EXPECT_EQ(m.to_string(), "2018-12");
  EXPECT_EQ((m + 1).to_string(), "2019-01");
  EXPECT_EQ((m - 12).to_string(), "2017-12");
  EXPECT_EQ(MonthStamp(2019, 3) - m, 3);
  EXPECT_LT(m, m + 1);
}

TEST(ParseDate, AcceptsMonthAndDayPrecision) {
  const auto d = parse_date("2018-08-13");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->day, 13);
  EXPECT_EQ(d->month_stamp().to_string(), "2018-08");
  const auto m = parse_date("2018-08");
  ASSERT_TRUE(m);
  EXPECT_EQ(m->day, 0);
  EXPECT_EQ(parse_month("2021-02-28")->to_string(), "2021-02");
}

TEST(ParseDate, RejectsMalformed) {
  for (const char* bad : {"", "2018", "2018-13", "2018-00", "2018-02-30", "2019-02-29", "18-01", "2018/01",
                          "2018-01-1x", "abcd-ef"}) {
    EXPECT_FALSE(parse_date(bad)) << bad;
  }
  EXPECT_TRUE(parse_date("2020-02-29"));
}

}  // namespace
}  // namespace hedgefx
