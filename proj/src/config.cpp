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

#include "hedgefx/config.hpp"

#include <algorithm>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hedgefx/error.hpp"

namespace hedgefx::pipeline {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw config_error(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(where + "." + key + " is missing or has the wrong type");
  }
}

template <typename T>
T get_or(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

MonthStamp month_field(const json& obj, const char* key, const std::string& where) {
  const auto text = get<std::string>(obj, key, where);
  const auto m = parse_month(text);
  if (!m) throw config_error(where + "." + key + ": malformed date '" + text + "'");
  return *m;
}

BootstrapConfig parse_bootstrap(const json& j, const std::string& where, const BootstrapConfig& base) {
  check_keys(j, where, {"replications", "block_length", "seed"});
  BootstrapConfig b = base;
  b.replications = get_or<std::size_t>(j, "replications", where, b.replications);
  b.block_length = get_or<std::size_t>(j, "block_length", where, b.block_length);
  if (j.contains("seed")) b.seed = get<std::uint64_t>(j, "seed", where);
  if (b.replications < 100) throw config_error(where + ".replications must be at least 100");
  return b;
}

qreg::FeatureSchema parse_schema(const json& j, const std::string& where) {
  check_keys(j, where, {"base_features", "lags", "event_dummies", "interactions", "excluded"});
  qreg::FeatureSchema s;
  s.base_features = get_or<std::vector<std::string>>(j, "base_features", where, {});
  s.lag_spec = get_or<std::map<std::string, std::vector<int>>>(j, "lags", where, {});
  s.event_dummies = get_or<std::map<std::string, std::vector<int>>>(j, "event_dummies", where, {});
  s.excluded = get_or<std::vector<std::string>>(j, "excluded", where, {});
  for (const auto& pair : get_or<std::vector<std::vector<std::string>>>(j, "interactions", where, {})) {
    if (pair.size() != 2) throw config_error(where + ".interactions entries must be [a, b] pairs");
    s.interaction_pairs.emplace_back(pair[0], pair[1]);
  }
  s.validate();
  return s;
}

Episode parse_episode(const json& j, const std::string& where, const std::filesystem::path& base_dir,
                      const BootstrapConfig& run_bootstrap) {
  check_keys(j, where, {"country", "crisis_date", "window_start", "window_end", "residency", "series_manifest",
                        "feature_schema", "quantile_override", "bootstrap"});
  Episode e;
  e.country = get<std::string>(j, "country", where);
  if (e.country.empty()) throw config_error(where + ".country is empty");
  e.crisis_date = get<std::string>(j, "crisis_date", where);
  const auto crisis = parse_date(e.crisis_date);
  if (!crisis) throw config_error(where + ".crisis_date: malformed date '" + e.crisis_date + "'");
  e.crisis_month = crisis->month_stamp();
  e.window_start = month_field(j, "window_start", where);
  e.window_end = month_field(j, "window_end", where);

  // window_start < crisis_date <= window_end, compared at day precision with
  // a month-only stamp read as the first of its month.
  const CalendarDate start{e.window_start.year(), e.window_start.month(), 1};
  const CalendarDate crisis_day{crisis->year, crisis->month, crisis->day == 0 ? 1 : crisis->day};
  if (!(start < crisis_day)) {
    throw config_error(where + ": window_start " + e.window_start.to_string() + " must precede crisis_date " +
                       e.crisis_date);
  }
  if (e.crisis_month > e.window_end) {
    throw config_error(where + ": crisis_date " + e.crisis_date + " is after window_end " +
                       e.window_end.to_string());
  }

  const auto residency = get<std::vector<std::string>>(j, "residency", where);
  if (residency.empty()) throw config_error(where + ".residency is empty");
  for (const auto& r : residency) {
    hedge::Residency value;
    if (r == "local") {
      value = hedge::Residency::kLocal;
    } else if (r == "foreign") {
      value = hedge::Residency::kForeign;
    } else {
      throw config_error(where + ".residency: unknown value '" + r + "' (expected local or foreign)");
    }
    if (std::find(e.residency.begin(), e.residency.end(), value) != e.residency.end()) {
      throw config_error(where + ".residency lists '" + r + "' twice");
    }
    e.residency.push_back(value);
  }
  // Canonical order: foreign before local, as in the report table.
  std::sort(e.residency.begin(), e.residency.end(),
            [](hedge::Residency a, hedge::Residency b) { return a == hedge::Residency::kForeign && b != a; });

  e.series_manifest = base_dir / get<std::string>(j, "series_manifest", where);
  e.feature_schema = parse_schema(j.contains("feature_schema") ? j.at("feature_schema") : json::object(),
                                  where + ".feature_schema");
  e.quantile_override = get_or<std::vector<double>>(j, "quantile_override", where, {});
  for (double tau : e.quantile_override) {
    if (!(tau > 0.0 && tau < 1.0)) throw config_error(where + ".quantile_override: " + std::to_string(tau) +
                                                      " outside (0,1)");
  }
  if (!std::is_sorted(e.quantile_override.begin(), e.quantile_override.end(), std::less_equal<>())) {
    throw config_error(where + ".quantile_override must be strictly increasing");
  }
  if (j.contains("bootstrap")) e.bootstrap = parse_bootstrap(j.at("bootstrap"), where + ".bootstrap", run_bootstrap);
  return e;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc, "config", {"schema_version", "seed", "output_dir", "criterion", "bootstrap", "cv",
                             "attribution", "episodes"});
  RunConfig c;
  c.text = text;
  c.schema_version = get_or<int>(doc, "schema_version", "config", kConfigSchemaVersion);
  if (c.schema_version != kConfigSchemaVersion) {
    throw config_error("unsupported schema_version " + std::to_string(c.schema_version));
  }
  c.seed = get_or<std::uint64_t>(doc, "seed", "config", 0);
  if (doc.contains("output_dir")) c.output_dir = base_dir / get<std::string>(doc, "output_dir", "config");
  const auto criterion = get_or<std::string>(doc, "criterion", "config", "aic");
  if (criterion == "aic") {
    c.criterion = copula::Criterion::kAic;
  } else if (criterion == "bic") {
    c.criterion = copula::Criterion::kBic;
  } else {
    throw config_error("criterion must be 'aic' or 'bic', got '" + criterion + "'");
  }
  if (doc.contains("bootstrap")) c.bootstrap = parse_bootstrap(doc.at("bootstrap"), "bootstrap", c.bootstrap);
  if (doc.contains("cv")) {
    const auto& j = doc.at("cv");
    check_keys(j, "cv", {"enabled", "initial_window", "step", "crisis_aware"});
    c.cv.enabled = get_or<bool>(j, "enabled", "cv", c.cv.enabled);
    c.cv.initial_window = get_or<std::size_t>(j, "initial_window", "cv", c.cv.initial_window);
    c.cv.step = get_or<std::size_t>(j, "step", "cv", c.cv.step);
    c.cv.crisis_aware = get_or<bool>(j, "crisis_aware", "cv", c.cv.crisis_aware);
    if (c.cv.initial_window < 10) throw config_error("cv.initial_window must be at least 10");
    if (c.cv.step == 0) throw config_error("cv.step must be positive");
  }
  if (doc.contains("attribution")) {
    const auto& j = doc.at("attribution");
    check_keys(j, "attribution", {"enabled", "replications", "block_length"});
    c.attribution.enabled = get_or<bool>(j, "enabled", "attribution", c.attribution.enabled);
    c.attribution.replications = get_or<std::size_t>(j, "replications", "attribution", c.attribution.replications);
    c.attribution.block_length = get_or<std::size_t>(j, "block_length", "attribution", c.attribution.block_length);
    if (c.attribution.replications < 2) throw config_error("attribution.replications must be at least 2");
  }
  if (!doc.contains("episodes") || !doc.at("episodes").is_array() || doc.at("episodes").empty()) {
    throw config_error("episodes must be a non-empty array");
  }
  std::set<std::string> countries;
  for (std::size_t i = 0; i < doc.at("episodes").size(); ++i) {
    auto e = parse_episode(doc.at("episodes")[i], "episodes[" + std::to_string(i) + "]", base_dir, c.bootstrap);
    if (!countries.insert(e.country).second) throw config_error("country '" + e.country + "' listed twice");
    c.episodes.push_back(std::move(e));
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig c = parse_config(buf.str(), path.parent_path());
  c.source = path;
  return c;
}

void apply_fast_profile(RunConfig& config) {
  config.bootstrap.replications = std::min(config.bootstrap.replications, kFastReplications);
  for (auto& e : config.episodes) {
    if (e.bootstrap) e.bootstrap->replications = std::min(e.bootstrap->replications, kFastReplications);
  }
  config.attribution.replications = std::min(config.attribution.replications, kFastReplications);
}

}  // namespace hedgefx::pipeline
