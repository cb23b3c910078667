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

#include <charconv>
#include <cstdio>

namespace hedgefx {
namespace {

bool parse_fixed_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0)) return 29;
  return kDays[month - 1];
}

}  // namespace

std::string MonthStamp::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
  return buf;
}

std::optional<CalendarDate> parse_date(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.size() != 7 && text.size() != 10) return std::nullopt;
  if (text[4] != '-') return std::nullopt;
  CalendarDate d;
  if (!parse_fixed_int(text.substr(0, 4), d.year)) return std::nullopt;
  if (!parse_fixed_int(text.substr(5, 2), d.month)) return std::nullopt;
  if (d.month < 1 || d.month > 12) return std::nullopt;
  if (text.size() == 10) {
    if (text[7] != '-') return std::nullopt;
    if (!parse_fixed_int(text.substr(8, 2), d.day)) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  }
  return d;
}

std::optional<MonthStamp> parse_month(std::string_view text) {
  auto d = parse_date(text);
  if (!d) return std::nullopt;
  return d->month_stamp();
}

}  // namespace hedgefx
