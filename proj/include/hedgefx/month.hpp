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

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace hedgefx {

// Calendar month with no day component. Stored as a serial month count so
// arithmetic and ordering are trivial.
class MonthStamp {
 public:
  constexpr MonthStamp() = default;
  constexpr MonthStamp(int year, int month) : serial_(year * 12 + (month - 1)) {}

  static constexpr MonthStamp from_serial(int serial) {
    MonthStamp m;
    m.serial_ = serial;
    return m;
  }

  constexpr int year() const { return floor_div(serial_, 12); }
  constexpr int month() const { return serial_ - floor_div(serial_, 12) * 12 + 1; }
  constexpr int serial() const { return serial_; }

  constexpr MonthStamp operator+(int months) const { return from_serial(serial_ + months); }
  constexpr MonthStamp operator-(int months) const { return from_serial(serial_ - months); }
  constexpr int operator-(MonthStamp other) const { return serial_ - other.serial_; }

  constexpr auto operator<=>(const MonthStamp&) const = default;

  // "YYYY-MM".
  std::string to_string() const;

 private:
  static constexpr int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }
  int serial_ = 0;
};

// A calendar date as parsed from input files; `day` is 0 for month-only
// stamps.
struct CalendarDate {
  int year = 0;
  int month = 0;
  int day = 0;

  MonthStamp month_stamp() const { return MonthStamp(year, month); }
  auto operator<=>(const CalendarDate&) const = default;
};

// Accepts "YYYY-MM" or "YYYY-MM-DD". Returns nullopt on malformed input or
// out-of-range fields.
std::optional<CalendarDate> parse_date(std::string_view text);

// Parses a date and truncates it to its month.
std::optional<MonthStamp> parse_month(std::string_view text);

}  // namespace hedgefx
