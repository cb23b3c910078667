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

// Monthly macro series: CSV ingestion, frequency conversion, source
// reliability scoring and reliability-weighted fusion of an official series
// with a proxy.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hedgefx/month.hpp"

namespace hedgefx::dataio {

enum class SourceKind { kOfficial, kProxy, kHybrid };

const char* to_string(SourceKind kind);
std::optional<SourceKind> parse_source_kind(const std::string& text);

struct Observation {
  MonthStamp month;
  double value = 0.0;
  // Where the value came from. For fused series this records the per-month
  // pass-through source; otherwise it equals the series' source_kind.
  SourceKind origin = SourceKind::kOfficial;
};

// A monthly series. Months are strictly increasing; missing months are gaps,
// never sentinel values.
struct MacroSeries {
  std::string name;
  std::string unit;
  SourceKind source_kind = SourceKind::kOfficial;
  std::optional<double> reliability;
  std::vector<Observation> observations;

  bool empty() const { return observations.empty(); }
  std::size_t size() const { return observations.size(); }
  std::optional<double> at(MonthStamp m) const;
  MonthStamp first_month() const;
  MonthStamp last_month() const;

  // Throws a data error if months are not strictly increasing or a value is
  // not finite.
  void validate() const;
};

// Observations at date precision, before monthly conversion.
struct DatedObservation {
  CalendarDate date;
  double value = 0.0;
};

struct DatedSeries {
  std::string name;
  std::string unit;
  SourceKind source_kind = SourceKind::kOfficial;
  std::vector<DatedObservation> observations;  // sorted by date
};

struct ColumnSpec {
  std::string date_column = "date";
  std::string value_column = "value";
};

// Reads every dated row of a CSV file. Empty and "NA" values are gaps and
// are skipped. Rows are returned sorted by date; duplicate dates are a data
// error.
DatedSeries load_dated(const std::filesystem::path& path, const ColumnSpec& columns = {});

// Reads a monthly CSV. Dates may carry a day component but each month may
// appear only once; a repeated month is a hard error naming the month.
MacroSeries load_series(const std::filesystem::path& path, const ColumnSpec& columns = {});

// Writes "date,value" rows using shortest round-trip formatting, so
// load_series(save_series(s)) reproduces every value bit-exactly.
void save_series(const MacroSeries& series, const std::filesystem::path& path);

enum class MonthlyMethod { kLast, kMean, kLinearInterp };

std::optional<MonthlyMethod> parse_monthly_method(const std::string& text);

struct MonthRange {
  MonthStamp first;
  MonthStamp last;
};

// Collapses dated observations to one value per month. kLinearInterp takes
// the last value in each observed month and fills interior gaps linearly.
// When `cover` is given the output is restricted to it; kLinearInterp then
// refuses to extrapolate past the observed range.
MacroSeries to_monthly(const DatedSeries& series, MonthlyMethod method,
                       std::optional<MonthRange> cover = std::nullopt);
MacroSeries to_monthly(const MacroSeries& series, MonthlyMethod method,
                       std::optional<MonthRange> cover = std::nullopt);

// Components are expected pre-normalized to [0, 1] by the caller.
struct ReliabilityInputs {
  double timeliness = 0.0;
  double revision_volatility = 0.0;
  double crosscheck_error = 0.0;
};

// q = 0.4 timeliness + 0.3 (1 - revision volatility) + 0.3 (1 - cross-check
// error).
double reliability_score(const ReliabilityInputs& inputs);

// Hybrid_t = q Actual_t + (1 - q) Proxy_t on shared months. Months with a
// single source pass that source through (tagged in Observation::origin);
// months with neither are absent from the output.
MacroSeries fuse_hybrid(const MacroSeries& actual, const MacroSeries& proxy, double q);

// ---------------------------------------------------------------------------
// Series manifest

enum class SeriesRole { kEquityIndex, kFx, kInflation, kFeature };

struct ManifestEntry {
  std::string name;
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string unit;
  SourceKind source_kind = SourceKind::kOfficial;
  SeriesRole role = SeriesRole::kFeature;
  ColumnSpec columns;
  bool daily = false;
  MonthlyMethod aggregate = MonthlyMethod::kLast;
  std::optional<ReliabilityInputs> reliability_inputs;
  std::optional<double> q;

  // q from the explicit value or the reliability components, if any.
  std::optional<double> resolved_q() const;
};

struct Manifest {
  int schema_version = 1;
  std::vector<ManifestEntry> entries;
};

Manifest load_manifest(const std::filesystem::path& path);

// Loaded series keyed by name. The role-designated series are also exposed
// under the canonical names "equity_index", "fx" and "inflation"; when both an
// official and a proxy inflation series are listed, "inflation" is their
// hybrid fused with the official series' q.
struct Panel {
  std::map<std::string, MacroSeries> series;
  std::vector<std::string> warnings;

  const MacroSeries& get(const std::string& name) const;
  bool contains(const std::string& name) const { return series.count(name) != 0; }
};

Panel load_panel(const Manifest& manifest);

}  // namespace hedgefx::dataio
