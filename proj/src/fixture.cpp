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

#include "hedgefx/fixture.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "hedgefx/copula.hpp"
#include "hedgefx/error.hpp"
#include "hedgefx/month.hpp"
#include "hedgefx/random.hpp"

namespace hedgefx::fixture {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Months of data before the window: six feature lags plus the base price.
constexpr int kBurnIn = 7;
constexpr double kTurkeyLambda = 0.34;

struct Profile {
  std::string country;
  std::string crisis_date;
  MonthStamp crisis_month;
};

Profile profile(Kind kind) {
  switch (kind) {
    case Kind::kPerfectHedge: return {"PerfectHedge", "2020-04-20", MonthStamp(2020, 4)};
    case Kind::kAntiHedge: return {"AntiHedge", "2018-12-03", MonthStamp(2018, 12)};
    case Kind::kClaytonCoupled: return {"ClaytonCoupled", "2019-06-03", MonthStamp(2019, 6)};
    case Kind::kIndependent: return {"Independent", "2021-03-15", MonthStamp(2021, 3)};
    case Kind::kTurkeyLike: return {"Turkey", "2018-08-13", MonthStamp(2018, 8)};
  }
  return {};
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("fixture", "cannot write " + path.string());
  out << text;
}

// Conditional inverse of the Clayton copula: v given u and a uniform w.
double clayton_conditional(double u, double w, double theta) {
  return std::pow((std::pow(w, -theta / (1.0 + theta)) - 1.0) * std::pow(u, -theta) + 1.0, -1.0 / theta);
}

double selected_lambda(const copula::PseudoSample& s, copula::Family& family) {
  std::vector<copula::CopulaFit> fits;
  for (auto f : copula::kAllFamilies) fits.push_back(copula::fit_copula(s, f));
  const auto best = copula::select_family(fits, copula::Criterion::kAic);
  family = best.family;
  return best.lambda_lower;
}

// Centers `x` on its window mean so the window average of
// level + scale * centered(x) is exactly `level` up to rounding.
std::vector<double> centered(const std::vector<double>& x, std::size_t window_begin, double level, double scale) {
  const double mean = std::accumulate(x.begin() + static_cast<long>(window_begin), x.end(), 0.0) /
                      static_cast<double>(x.size() - window_begin);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = level + scale * (x[i] - mean);
  return out;
}

struct Drivers {
  std::vector<double> u;  // equity driver
  std::vector<double> v;  // loss driver
};

// Finds Clayton draws whose AIC-selected fit on the window has lower tail
// dependence rounding to 0.34. Fitted lambda moves monotonically with the
// generating theta for fixed uniforms, so each attempt is a bisection.
Drivers calibrate_turkey(std::size_t m, std::size_t window_begin, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Rng rng(derive_seed(seed, 0x7475726bULL + attempt));
    Drivers d;
    std::vector<double> w(m);
    d.u.resize(m);
    d.v.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      d.u[i] = rng.uniform();
      w[i] = rng.uniform();
    }
    const auto draw = [&](double theta) {
      for (std::size_t i = 0; i < m; ++i) d.v[i] = clayton_conditional(d.u[i], w[i], theta);
      const std::vector<double> u(d.u.begin() + static_cast<long>(window_begin), d.u.end());
      const std::vector<double> v(d.v.begin() + static_cast<long>(window_begin), d.v.end());
      copula::Family family;
      const double lambda = selected_lambda(copula::make_pseudo_sample(u, v), family);
      return std::make_pair(lambda, family);
    };
    double lo = 0.05;
    double hi = 5.0;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto [lambda, family] = draw(mid);
      if (family == copula::Family::kClayton && std::abs(lambda - kTurkeyLambda) < 0.004) return d;
      if (family == copula::Family::kClayton && lambda > kTurkeyLambda) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  throw numerical_error("fixture", "could not calibrate the turkey_like tail dependence");
}

}  // namespace

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::kPerfectHedge: return "perfect_hedge";
    case Kind::kAntiHedge: return "anti_hedge";
    case Kind::kClaytonCoupled: return "clayton_coupled";
    case Kind::kIndependent: return "independent";
    case Kind::kTurkeyLike: return "turkey_like";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(const std::string& text) {
  for (auto k : {Kind::kPerfectHedge, Kind::kAntiHedge, Kind::kClaytonCoupled, Kind::kIndependent,
                 Kind::kTurkeyLike}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

Paths generate(Kind kind, const Options& options, const fs::path& out_dir) {
  if (options.n < kMinObservations) {
    throw invalid_argument("fixture", "n must be at least " + std::to_string(kMinObservations) + ", got " +
                                          std::to_string(options.n));
  }
  if (kind == Kind::kClaytonCoupled && !(options.theta > 0.0)) {
    throw invalid_argument("fixture", "Clayton theta must be positive");
  }
  const Profile p = profile(kind);
  const int n = static_cast<int>(options.n);
  const MonthStamp window_start = p.crisis_month - n / 3;
  const MonthStamp window_end = window_start + (n - 1);
  const MonthStamp first = window_start - kBurnIn;
  const std::size_t levels = static_cast<std::size_t>(n + kBurnIn);
  const std::size_t m = levels - 1;  // return months: first + 1 .. window_end
  const std::size_t wb = static_cast<std::size_t>(kBurnIn - 1);

  Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(kind)));
  Drivers d;
  if (kind == Kind::kTurkeyLike) {
    d = calibrate_turkey(m, wb, options.seed);
  } else {
    d.u.resize(m);
    d.v.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      d.u[i] = rng.uniform();
      const double w = rng.uniform();
      d.v[i] = kind == Kind::kClaytonCoupled ? clayton_conditional(d.u[i], w, options.theta) : w;
    }
  }

  // Monthly fractions: inflation pi, FX depreciation f, nominal equity r.
  std::vector<double> pi, f, r;
  switch (kind) {
    case Kind::kPerfectHedge:
      pi = centered(d.v, wb, 0.01, 0.03);
      f.assign(m, 0.004);
      r.resize(m);
      for (std::size_t i = 0; i < m; ++i) r[i] = pi[i] + f[i] + 0.003;
      break;
    case Kind::kAntiHedge:
      pi = centered(d.v, wb, 0.02, 0.4 * 0.04);
      f = centered(d.v, wb, 0.02, 0.6 * 0.04);
      r = centered(d.v, wb, 0.03, 3.0 * 0.04);
      break;
    case Kind::kTurkeyLike:
      pi = centered(d.v, wb, 0.0205, 0.4 * 0.04);
      f = centered(d.v, wb, 0.0207, 0.6 * 0.04);
      r = centered(d.u, wb, 0.0374, 3.0 * 0.04);
      break;
    case Kind::kClaytonCoupled:
    case Kind::kIndependent:
      pi = centered(d.v, wb, 0.02, 0.03);
      f.resize(m);
      for (std::size_t i = 0; i < m; ++i) f[i] = 0.5 * pi[i] + 0.005;
      r = centered(d.u, wb, 0.01, 0.1);
      break;
  }

  fs::create_directories(out_dir);
  std::vector<double> index(levels), fx(levels);
  index[0] = 1000.0;
  fx[0] = 5.0;
  for (std::size_t i = 1; i < levels; ++i) {
    index[i] = index[i - 1] * (1.0 + r[i - 1]);
    fx[i] = fx[i - 1] * (1.0 + f[i - 1]);
  }

  std::string index_csv = "date,value\n";
  std::string fx_csv = "date,value\n";
  std::string official_csv = "date,value\n";
  std::string proxy_csv = "date,value\n";
  std::string m2_csv = "date,value\n";
  std::string rate_csv = "date,value\n";
  std::string oil_csv = "date,value\n";
  std::string crisis_csv = "date,value\n";
  const double q = 0.4 * 0.9 + 0.3 * (1.0 - 0.2) + 0.3 * (1.0 - 0.1);
  double oil = 60.0;
  for (std::size_t i = 0; i < levels; ++i) {
    const MonthStamp month = first + static_cast<int>(i);
    const std::string ym = month.to_string();
    index_csv += ym + "," + num(index[i]) + "\n";
    fx_csv += ym + "-05," + num(fx[i] * (1.0 + 0.002 * rng.normal())) + "\n";
    fx_csv += ym + "-15," + num(fx[i] * (1.0 + 0.002 * rng.normal())) + "\n";
    fx_csv += ym + "-25," + num(fx[i]) + "\n";

    const double ret = i == 0 ? 0.01 : r[i - 1];
    const double infl = i == 0 ? 0.01 : pi[i - 1];
    if (i > 0) {
      // official = pi + (1 - q) delta, proxy = pi - q delta: the hybrid is pi.
      const double delta = 0.003 * rng.normal();
      official_csv += ym + "," + num(infl + (1.0 - q) * delta) + "\n";
      if (i > 2) proxy_csv += ym + "," + num(infl - q * delta) + "\n";
    }
    m2_csv += ym + "," + num(0.01 + 0.15 * (ret - 0.01) + 0.004 * rng.normal()) + "\n";
    rate_csv += ym + "," + num(0.08 + 1.2 * infl + 0.002 * rng.normal()) + "\n";
    oil *= std::exp(0.05 * rng.normal());
    oil_csv += ym + "," + num(oil) + "\n";
    const bool in_crisis = month >= p.crisis_month && month - p.crisis_month < 6;
    crisis_csv += ym + "," + (in_crisis ? "1" : "0") + "\n";
  }
  write_text(out_dir / "index.csv", index_csv);
  write_text(out_dir / "fx_daily.csv", fx_csv);
  write_text(out_dir / "cpi_official.csv", official_csv);
  write_text(out_dir / "cpi_proxy.csv", proxy_csv);
  write_text(out_dir / "m2.csv", m2_csv);
  write_text(out_dir / "rate.csv", rate_csv);
  write_text(out_dir / "oil.csv", oil_csv);
  write_text(out_dir / "crisis.csv", crisis_csv);

  const auto entry = [](const char* name, const char* path, const char* unit, const char* role) {
    return json{{"name", name}, {"path", path}, {"unit", unit}, {"role", role}};
  };
  json series = json::array();
  series.push_back(entry("index", "index.csv", "points", "equity_index"));
  auto fx_entry = entry("usd_rate", "fx_daily.csv", "local per USD", "fx");
  fx_entry["frequency"] = "daily";
  fx_entry["aggregate"] = "last";
  series.push_back(fx_entry);
  auto official = entry("cpi_official", "cpi_official.csv", "fraction m/m", "inflation");
  official["source_kind"] = "official";
  official["reliability"] = {{"timeliness", 0.9}, {"revision_volatility", 0.2}, {"crosscheck_error", 0.1}};
  series.push_back(official);
  auto proxy = entry("cpi_proxy", "cpi_proxy.csv", "fraction m/m", "inflation");
  proxy["source_kind"] = "proxy";
  series.push_back(proxy);
  series.push_back(entry("m2", "m2.csv", "fraction m/m", "feature"));
  series.push_back(entry("rate", "rate.csv", "fraction", "feature"));
  series.push_back(entry("oil", "oil.csv", "USD", "feature"));
  series.push_back(entry("crisis", "crisis.csv", "indicator", "feature"));
  const json manifest = {{"schema_version", 1}, {"series", series}};

  const json episode = {
      {"country", p.country},
      {"crisis_date", p.crisis_date},
      {"window_start", window_start.to_string()},
      {"window_end", window_end.to_string()},
      {"residency", json::array({"foreign", "local"})},
      {"series_manifest", "manifest.json"},
      {"feature_schema",
       {{"base_features", {"m2", "rate", "oil"}},
        {"lags", {{"m2", {1, 3, 6}}, {"rate", {1}}}},
        {"event_dummies", {{"crisis", {1, 2}}}},
        {"interactions", json::array({json::array({"m2", "rate"}), json::array({"m2_lag3", "oil"}),
                                       json::array({"rate", "crisis"})})}}}};
  const json config = {
      {"schema_version", 1},
      {"seed", options.seed},
      {"output_dir", "out"},
      {"criterion", "aic"},
      {"bootstrap", {{"replications", 1000}}},
      {"cv", {{"enabled", true}, {"initial_window", std::max(10, std::min(36, n / 2))}, {"step", 6},
              {"crisis_aware", true}}},
      {"attribution", {{"enabled", true}, {"replications", 1000}}},
      {"episodes", {episode}}};

  Paths paths;
  paths.dir = out_dir;
  paths.manifest = out_dir / "manifest.json";
  paths.config = out_dir / "config.json";
  write_text(paths.manifest, manifest.dump(2) + "\n");
  write_text(paths.config, config.dump(2) + "\n");
  return paths;
}

}  // namespace hedgefx::fixture
