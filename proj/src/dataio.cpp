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

#include "hedgefx/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hedgefx/error.hpp"

namespace hedgefx::dataio {
namespace {

constexpr const char* kModule = "dataio";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_gap_token(const std::string& s) { return s.empty() || s == "NA" || s == "na"; }

std::optional<double> parse_finite(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::filesystem::path& path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw data_error(kModule, path.string() + ": missing column '" + name + "'");
}

std::string with_row(const std::filesystem::path& path, std::size_t row, const std::string& msg) {
  return path.string() + ": row " + std::to_string(row) + ": " + msg;
}

}  // namespace

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kOfficial: return "official";
    case SourceKind::kProxy: return "proxy";
    case SourceKind::kHybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<SourceKind> parse_source_kind(const std::string& text) {
  if (text == "official") return SourceKind::kOfficial;
  if (text == "proxy") return SourceKind::kProxy;
  if (text == "hybrid") return SourceKind::kHybrid;
  return std::nullopt;
}

std::optional<double> MacroSeries::at(MonthStamp m) const {
  auto it = std::lower_bound(observations.begin(), observations.end(), m,
                             [](const Observation& o, MonthStamp key) { return o.month < key; });
  if (it == observations.end() || it->month != m) return std::nullopt;
  return it->value;
}

MonthStamp MacroSeries::first_month() const {
  if (observations.empty()) throw data_error(kModule, "series '" + name + "' is empty");
  return observations.front().month;
}

MonthStamp MacroSeries::last_month() const {
  if (observations.empty()) throw data_error(kModule, "series '" + name + "' is empty");
  return observations.back().month;
}

void MacroSeries::validate() const {
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (!std::isfinite(observations[i].value)) {
      throw data_error(kModule, "series '" + name + "' has a non-finite value at " +
                                    observations[i].month.to_string());
    }
    if (i > 0 && observations[i].month <= observations[i - 1].month) {
      throw data_error(kModule, "series '" + name + "' months not strictly increasing at " +
                                    observations[i].month.to_string());
    }
  }
}

DatedSeries load_dated(const std::filesystem::path& path, const ColumnSpec& columns) {
  std::ifstream in(path);
  if (!in) throw data_error(kModule, "file not found: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw data_error(kModule, path.string() + ": missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);
  const std::size_t date_col = column_index(header, columns.date_column, path);
  const std::size_t value_col = column_index(header, columns.value_column, path);

  DatedSeries out;
  out.name = path.stem().string();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() <= std::max(date_col, value_col)) {
      throw data_error(kModule, with_row(path, row, "malformed row (too few fields)"));
    }
    auto date = parse_date(fields[date_col]);
    if (!date) throw data_error(kModule, with_row(path, row, "malformed date '" + fields[date_col] + "'"));
    const std::string raw_value = trim(fields[value_col]);
    if (is_gap_token(raw_value)) continue;
    auto value = parse_finite(raw_value);
    if (!value) throw data_error(kModule, with_row(path, row, "malformed value '" + raw_value + "'"));
    out.observations.push_back({*date, *value});
  }

  std::stable_sort(out.observations.begin(), out.observations.end(),
                   [](const DatedObservation& a, const DatedObservation& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < out.observations.size(); ++i) {
    if (out.observations[i].date == out.observations[i - 1].date) {
      const auto& d = out.observations[i].date;
      if (d.day == 0) {
        throw data_error(kModule, path.string() + ": duplicate month " + d.month_stamp().to_string());
      }
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
      throw data_error(kModule, path.string() + ": duplicate date " + buf);
    }
  }
  return out;
}

MacroSeries load_series(const std::filesystem::path& path, const ColumnSpec& columns) {
  DatedSeries dated = load_dated(path, columns);
  MacroSeries out;
  out.name = dated.name;
  out.observations.reserve(dated.observations.size());
  for (const auto& obs : dated.observations) {
    const MonthStamp m = obs.date.month_stamp();
    if (!out.observations.empty() && out.observations.back().month == m) {
      throw data_error(kModule, path.string() + ": duplicate month " + m.to_string());
    }
    out.observations.push_back({m, obs.value, SourceKind::kOfficial});
  }
  return out;
}

void save_series(const MacroSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error(kModule, "cannot write " + path.string());
  out << "date,value\n";
  char buf[64];
  for (const auto& obs : series.observations) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), obs.value);
    out << obs.month.to_string() << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
        << '\n';
  }
}

std::optional<MonthlyMethod> parse_monthly_method(const std::string& text) {
  if (text == "last") return MonthlyMethod::kLast;
  if (text == "mean") return MonthlyMethod::kMean;
  if (text == "linear_interp") return MonthlyMethod::kLinearInterp;
  return std::nullopt;
}

namespace {

struct MonthBucket {
  MonthStamp month;
  double last = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
};

MacroSeries from_buckets(const std::vector<MonthBucket>& buckets, MonthlyMethod method,
                         std::optional<MonthRange> cover, MacroSeries out) {
  if (buckets.empty()) throw data_error(kModule, "to_monthly: empty series '" + out.name + "'");
  out.observations.clear();

  if (method != MonthlyMethod::kLinearInterp) {
    for (const auto& b : buckets) {
      if (cover && (b.month < cover->first || b.month > cover->last)) continue;
      const double v = method == MonthlyMethod::kLast ? b.last : b.sum / static_cast<double>(b.count);
      out.observations.push_back({b.month, v, out.source_kind});
    }
    return out;
  }

  MonthStamp first = buckets.front().month;
  MonthStamp last = buckets.back().month;
  if (cover) {
    if (cover->first < first || cover->last > last) {
      throw data_error(kModule, "to_monthly: linear_interp cannot extrapolate '" + out.name +
                                    "' beyond " + first.to_string() + ".." + last.to_string());
    }
    first = cover->first;
    last = cover->last;
  }
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const auto& b = buckets[i];
    if (b.month >= first && b.month <= last) {
      out.observations.push_back({b.month, b.last, out.source_kind});
    }
    if (i + 1 < buckets.size()) {
      const auto& next = buckets[i + 1];
      const int span = next.month - b.month;
      for (int k = 1; k < span; ++k) {
        const MonthStamp m = b.month + k;
        if (m < first || m > last) continue;
        const double w = static_cast<double>(k) / static_cast<double>(span);
        out.observations.push_back({m, b.last + w * (next.last - b.last), out.source_kind});
      }
    }
  }
  return out;
}

}  // namespace

MacroSeries to_monthly(const DatedSeries& series, MonthlyMethod method, std::optional<MonthRange> cover) {
  std::vector<MonthBucket> buckets;
  for (const auto& obs : series.observations) {
    const MonthStamp m = obs.date.month_stamp();
    if (buckets.empty() || buckets.back().month != m) buckets.push_back({m, 0.0, 0.0, 0});
    auto& b = buckets.back();
    b.last = obs.value;
    b.sum += obs.value;
    ++b.count;
  }
  MacroSeries out;
  out.name = series.name;
  out.unit = series.unit;
  out.source_kind = series.source_kind;
  return from_buckets(buckets, method, cover, std::move(out));
}

MacroSeries to_monthly(const MacroSeries& series, MonthlyMethod method, std::optional<MonthRange> cover) {
  series.validate();
  std::vector<MonthBucket> buckets;
  buckets.reserve(series.size());
  for (const auto& obs : series.observations) buckets.push_back({obs.month, obs.value, obs.value, 1});
  MacroSeries out = series;
  return from_buckets(buckets, method, cover, std::move(out));
}

double reliability_score(const ReliabilityInputs& in) {
  const auto check = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw invalid_argument(kModule, std::string("reliability component '") + what + "' outside [0,1]");
    }
  };
  check(in.timeliness, "timeliness");
  check(in.revision_volatility, "revision_volatility");
  check(in.crosscheck_error, "crosscheck_error");
  const double q = 0.4 * in.timeliness + 0.3 * (1.0 - in.revision_volatility) +
                   0.3 * (1.0 - in.crosscheck_error);
  return std::clamp(q, 0.0, 1.0);
}

MacroSeries fuse_hybrid(const MacroSeries& actual, const MacroSeries& proxy, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw invalid_argument(kModule, "fuse_hybrid: q outside [0,1]");
  if (actual.empty() && proxy.empty()) throw data_error(kModule, "fuse_hybrid: both inputs empty");
  actual.validate();
  proxy.validate();

  MacroSeries out;
  out.name = actual.name.empty() ? proxy.name : actual.name;
  out.unit = actual.unit.empty() ? proxy.unit : actual.unit;
  out.source_kind = SourceKind::kHybrid;
  out.reliability = q;

  auto a = actual.observations.begin();
  auto p = proxy.observations.begin();
  while (a != actual.observations.end() || p != proxy.observations.end()) {
    if (p == proxy.observations.end() || (a != actual.observations.end() && a->month < p->month)) {
      out.observations.push_back({a->month, a->value, SourceKind::kOfficial});
      ++a;
    } else if (a == actual.observations.end() || p->month < a->month) {
      out.observations.push_back({p->month, p->value, SourceKind::kProxy});
      ++p;
    } else {
      out.observations.push_back({a->month, q * a->value + (1.0 - q) * p->value, SourceKind::kHybrid});
      ++a;
      ++p;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

std::optional<double> ManifestEntry::resolved_q() const {
  if (q) return q;
  if (reliability_inputs) return reliability_score(*reliability_inputs);
  return std::nullopt;
}

namespace {

SeriesRole parse_role(const std::string& s) {
  if (s == "equity_index") return SeriesRole::kEquityIndex;
  if (s == "fx") return SeriesRole::kFx;
  if (s == "inflation") return SeriesRole::kInflation;
  if (s == "feature") return SeriesRole::kFeature;
  throw config_error("manifest: unknown role '" + s + "'");
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("manifest not found: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("manifest " + path.string() + ": " + e.what());
  }

  Manifest m;
  try {
    m.schema_version = doc.value("schema_version", 1);
    if (m.schema_version != 1) {
      throw config_error("manifest: unsupported schema_version " + std::to_string(m.schema_version));
    }
    const auto base = path.parent_path();
    for (const auto& item : doc.at("series")) {
      ManifestEntry e;
      e.name = item.at("name").get<std::string>();
      e.path = base / item.at("path").get<std::string>();
      e.unit = item.value("unit", "");
      auto kind = parse_source_kind(item.value("source_kind", "official"));
      if (!kind) throw config_error("manifest: bad source_kind for '" + e.name + "'");
      e.source_kind = *kind;
      e.role = parse_role(item.value("role", "feature"));
      e.columns.date_column = item.value("date_column", "date");
      e.columns.value_column = item.value("value_column", "value");
      e.daily = item.value("frequency", "monthly") == "daily";
      auto agg = parse_monthly_method(item.value("aggregate", "last"));
      if (!agg) throw config_error("manifest: bad aggregate for '" + e.name + "'");
      e.aggregate = *agg;
      if (item.contains("q")) e.q = item.at("q").get<double>();
      if (item.contains("reliability")) {
        const auto& r = item.at("reliability");
        e.reliability_inputs = ReliabilityInputs{r.at("timeliness").get<double>(),
                                                 r.at("revision_volatility").get<double>(),
                                                 r.at("crosscheck_error").get<double>()};
      }
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error("manifest " + path.string() + ": " + e.what());
  }
  return m;
}

const MacroSeries& Panel::get(const std::string& name) const {
  auto it = series.find(name);
  if (it == series.end()) throw data_error(kModule, "series '" + name + "' not in panel");
  return it->second;
}

Panel load_panel(const Manifest& manifest) {
  Panel panel;
  const ManifestEntry* equity = nullptr;
  const ManifestEntry* fx = nullptr;
  std::vector<const ManifestEntry*> inflation;

  for (const auto& e : manifest.entries) {
    MacroSeries s;
    if (e.daily) {
      DatedSeries d = load_dated(e.path, e.columns);
      d.name = e.name;
      d.unit = e.unit;
      d.source_kind = e.source_kind;
      s = to_monthly(d, e.aggregate);
    } else {
      s = load_series(e.path, e.columns);
      s.name = e.name;
      s.unit = e.unit;
      s.source_kind = e.source_kind;
      for (auto& o : s.observations) o.origin = e.source_kind;
    }
    s.reliability = e.resolved_q();
    if (!panel.series.emplace(e.name, std::move(s)).second) {
      throw config_error("manifest: duplicate series name '" + e.name + "'");
    }
    switch (e.role) {
      case SeriesRole::kEquityIndex:
        if (equity) throw config_error("manifest: more than one equity_index series");
        equity = &e;
        break;
      case SeriesRole::kFx:
        if (fx) throw config_error("manifest: more than one fx series");
        fx = &e;
        break;
      case SeriesRole::kInflation:
        inflation.push_back(&e);
        break;
      case SeriesRole::kFeature:
        break;
    }
  }
  if (!equity) throw config_error("manifest: no equity_index series");
  if (!fx) throw config_error("manifest: no fx series");
  if (inflation.empty()) throw config_error("manifest: no inflation series");
  if (inflation.size() > 2) throw config_error("manifest: at most two inflation series (official + proxy)");

  const auto alias = [&](const std::string& canonical, const std::string& name) {
    if (canonical == name) return;
    if (panel.series.count(canonical)) {
      throw config_error("manifest: series name '" + canonical + "' is reserved for the role alias");
    }
    MacroSeries copy = panel.series.at(name);
    copy.name = canonical;
    panel.series.emplace(canonical, std::move(copy));
  };
  alias("equity_index", equity->name);
  alias("fx", fx->name);

  if (inflation.size() == 1) {
    alias("inflation", inflation.front()->name);
  } else {
    const ManifestEntry* official = nullptr;
    const ManifestEntry* proxy = nullptr;
    for (const auto* e : inflation) {
      if (e->source_kind == SourceKind::kOfficial) official = e;
      if (e->source_kind == SourceKind::kProxy) proxy = e;
    }
    if (!official || !proxy) {
      throw config_error("manifest: two inflation series must be one official and one proxy");
    }
    const auto q = official->resolved_q();
    if (!q) throw config_error("manifest: official inflation series needs 'q' or 'reliability'");
    if (panel.series.count("inflation")) {
      throw config_error("manifest: series name 'inflation' is reserved for the fused series");
    }
    MacroSeries fused = fuse_hybrid(panel.series.at(official->name), panel.series.at(proxy->name), *q);
    fused.name = "inflation";
    std::size_t pass_through = 0;
    for (const auto& o : fused.observations) pass_through += o.origin != SourceKind::kHybrid;
    if (pass_through > 0) {
      panel.warnings.push_back("inflation: " + std::to_string(pass_through) +
                               " month(s) passed through from a single source");
    }
    panel.series.emplace("inflation", std::move(fused));
  }
  return panel;
}

}  // namespace hedgefx::dataio
