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

#include "hedgefx/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hedgefx/dataio.hpp"
#include "hedgefx/error.hpp"
#include "hedgefx/random.hpp"
#include "hedgefx/stats.hpp"

namespace hedgefx::pipeline {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kModule = "pipeline";
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw data_error(kModule, "cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Re-raises `e` with the episode prepended, keeping kind and module.
Error in_episode(const Error& e, const std::string& country) {
  std::string message = e.what();
  const std::string prefix = e.module() + ": ";
  if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
  return Error(e.kind(), e.module(), "episode " + country + ": " + message);
}

template <typename F>
auto stage(const std::string& country, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw in_episode(e, country);
  }
}

std::uint64_t task_seed(std::uint64_t base, const std::string& country, const std::string& tag) {
  return derive_seed(base, fnv1a(country + "/" + tag));
}

// Shortest round-trip decimal; NaN and infinities become "NA".
std::string num(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed decimals for the Table-1 columns, never "-0.00".
std::string fixed(double v, int decimals) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error(kModule, "cannot write " + tmp.string());
    out << content;
    if (!out) throw data_error(kModule, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct Prepared {
  const Episode* episode = nullptr;
  dataio::Manifest manifest;
  dataio::Panel panel;
  returns::ReturnSeries returns;
  std::vector<MonthStamp> window_months;
  std::vector<double> window_nominal;
};

Prepared prepare(const Episode& e) {
  Prepared p;
  p.episode = &e;
  p.manifest = stage(e.country, [&] { return dataio::load_manifest(e.series_manifest); });
  p.panel = stage(e.country, [&] { return dataio::load_panel(p.manifest); });
  p.returns = stage(e.country, [&] {
    const auto prices = returns::align_prices(p.panel.get("equity_index"), p.panel.get("fx"));
    return returns::build_return_series(prices, p.panel.get("inflation"));
  });
  for (std::size_t i = 0; i < p.returns.size(); ++i) {
    if (p.returns.months[i] < e.window_start || p.returns.months[i] > e.window_end) continue;
    p.window_months.push_back(p.returns.months[i]);
    p.window_nominal.push_back(p.returns.nominal[i]);
  }
  if (p.window_months.empty()) {
    throw data_error("returns", "episode " + e.country + ": no returns inside window " + e.window_start.to_string() +
                                    ".." + e.window_end.to_string());
  }
  return p;
}

qreg::DesignMatrix build_design(const Prepared& p) {
  const Episode& e = *p.episode;
  qreg::FeatureSchema schema = e.feature_schema;
  // The equity index may carry any name in the manifest; it is never a
  // feature.
  for (const auto& entry : p.manifest.entries) {
    if (entry.role == dataio::SeriesRole::kEquityIndex) schema.excluded.push_back(entry.name);
  }
  dataio::MacroSeries target;
  target.name = "nominal_return";
  for (std::size_t i = 0; i < p.returns.size(); ++i) {
    target.observations.push_back({p.returns.months[i], p.returns.nominal[i], dataio::SourceKind::kOfficial});
  }
  return qreg::engineer_features(p.panel.series, schema, target, dataio::MonthRange{e.window_start, e.window_end});
}

QuantileResult fit_tau(const RunConfig& config, const Prepared& p, const qreg::DesignMatrix& x, double tau,
                       std::vector<std::string>& diagnostics) {
  const Episode& e = *p.episode;
  QuantileResult q;
  q.tau = tau;
  q.model = qreg::fit_quantile(x, tau);
  for (const auto& w : q.model.warnings) diagnostics.push_back(e.country + " tau=" + num(tau) + ": " + w);
  if (!config.cv.enabled) return q;
  std::optional<std::size_t> crisis_row;
  if (config.cv.crisis_aware) {
    const auto it = std::find(x.months.begin(), x.months.end(), e.crisis_month);
    if (it != x.months.end()) {
      const auto row = static_cast<std::size_t>(it - x.months.begin());
      if (row >= 10) {
        crisis_row = row;
      } else {
        diagnostics.push_back(e.country + ": crisis month is row " + std::to_string(row) +
                              "; too early to force into a test fold");
      }
    }
  }
  try {
    q.cv = qreg::expanding_window_cv(x, tau, config.cv.initial_window, config.cv.step, crisis_row);
  } catch (const Error& err) {
    diagnostics.push_back(e.country + " tau=" + num(tau) + ": cross-validation skipped: " + err.what());
  }
  return q;
}

ResidencyResult analyse_residency(const RunConfig& config, const Prepared& p, hedge::Residency residency,
                                  const tailsel::TailQuantileTriplet& triplet) {
  const Episode& e = *p.episode;
  ResidencyResult r;
  r.residency = residency;
  const std::string tag = hedge::to_string(residency);
  const auto loss = stage(e.country, [&] {
    return hedge::restrict(hedge::loss_series(p.panel.get("inflation"), p.panel.get("fx"), residency),
                           e.window_start, e.window_end);
  });
  r.loss = loss.loss;

  stage(e.country, [&] {
    if (loss.months != p.window_months) {
      throw data_error("hedge", tag + " loss months do not match the return window");
    }
    const auto sample = copula::make_pseudo_sample(p.window_nominal, loss.loss);
    for (auto family : copula::kAllFamilies) r.fits.push_back(copula::fit_copula(sample, family));
    auto selected = copula::select_family(r.fits, config.criterion);
    selected.empirical_lambda_at_tau = copula::empirical_tail_dependence(sample, triplet.tau_low);

    const auto& boot = config.bootstrap_for(e);
    copula::BootstrapOptions options;
    options.replications = boot.replications;
    options.block_length = boot.block_length;
    options.seed = task_seed(boot.seed.value_or(config.seed), e.country, "copula/" + tag);
    r.interval = copula::block_bootstrap_ci(sample, copula::fitted_lambda_statistic(selected.family), options);
    selected.lambda_lower_ci = {r.interval.lo, r.interval.hi};
    r.selected = selected;
    return 0;
  });

  const hedge::TailDependenceInput td{copula::to_string(r.selected->family), r.selected->lambda_lower,
                                      r.selected->lambda_lower_ci, r.selected->empirical_lambda_at_tau};
  r.report = stage(e.country, [&] {
    return hedge::build_hedge_report(e.country, e.crisis_date, p.window_months, p.window_nominal, loss, td, triplet);
  });
  r.net = hedge::net_real_return(p.window_nominal, loss);
  return r;
}

void attribute(const RunConfig& config, EpisodeResult& er) {
  const auto& x = er.design;
  const auto means = attribution::background_means(x, x.rows());
  for (auto& q : er.quantiles) {
    const std::string label = er.episode.country + " tau=" + num(q.tau);
    q.attributions = attribution::attribute_rows(q.model, x, means);
    for (const auto& a : q.attributions) {
      double sum = a.phi0;
      for (double v : a.phi) sum += v;
      if (std::abs(sum - a.prediction) > 1e-10 * std::max(1.0, std::abs(a.prediction))) {
        er.diagnostics.push_back(label + ": attribution efficiency gap at " + a.instance_month->to_string());
      }
    }
    try {
      q.importance = attribution::importance_summary(q.attributions);
    } catch (const Error& err) {
      er.diagnostics.push_back(label + ": " + err.what());
      continue;
    }
    attribution::StabilityOptions options;
    options.replications = config.attribution.replications;
    options.block_length = config.attribution.block_length;
    options.seed = task_seed(config.seed, er.episode.country, "attribution/" + num(q.tau));
    try {
      q.stability = attribution::bootstrap_stability(x, q.tau, options);
      q.importance->stability_kendall_tau = q.stability->kendall_tau;
    } catch (const Error& err) {
      er.diagnostics.push_back(label + ": rank stability unavailable: " + err.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization

json triplet_json(const tailsel::TailQuantileTriplet& t) {
  return {{"tau_low", t.tau_low},
          {"tau_mid", t.tau_mid},
          {"tau_high", t.tau_high},
          {"per_country_taus", t.per_country_taus},
          {"variance_ratio", t.variance_ratio},
          {"warnings", t.warnings}};
}

json report_json(const hedge::HedgeReport& r) {
  return {{"country", r.country},
          {"residency", hedge::to_string(r.residency)},
          {"crisis_date", r.crisis_date},
          {"hedge_effectiveness_pct", r.diagnostic.empty() ? json(r.hedge_effectiveness_pct) : json(nullptr)},
          {"mean_erosion_pct", r.mean_erosion_pct},
          {"mean_net_real_pct", r.mean_net_real_pct},
          {"mean_nominal_pct", r.mean_nominal_pct},
          {"tail_dependence", r.tail_dependence},
          {"tail_dependence_ci", {r.tail_dependence_ci.first, r.tail_dependence_ci.second}},
          {"empirical_tail_dependence", r.empirical_tail_dependence},
          {"copula_family", r.copula_family},
          {"observations", r.observations},
          {"tau_low", r.quantile_triplet.tau_low},
          {"tau_mid", r.quantile_triplet.tau_mid},
          {"tau_high", r.quantile_triplet.tau_high},
          {"diagnostic", r.diagnostic},
          {"notes", r.notes}};
}

json fit_json(const copula::CopulaFit& f) {
  return {{"family", copula::to_string(f.family)},
          {"theta", f.theta},
          {"log_likelihood", f.log_likelihood},
          {"aic", f.aic},
          {"bic", f.bic},
          {"lambda_lower", f.lambda_lower},
          {"status", copula::to_string(f.status)},
          {"diagnostic", f.diagnostic},
          {"iterations", f.iterations}};
}

json cv_json(const qreg::CvReport& cv) {
  json folds = json::array();
  for (const auto& f : cv.folds) {
    folds.push_back({{"train_rows", f.train_end},
                     {"test_rows", {f.test_begin, f.test_end}},
                     {"last_train_month", f.last_train_month.to_string()},
                     {"first_test_month", f.first_test_month.to_string()},
                     {"mae", f.mae},
                     {"pseudo_r2", f.pseudo_r2},
                     {"intercept", f.intercept},
                     {"coefficients", f.coefficients}});
  }
  return {{"folds", folds}, {"pooled_mae", cv.pooled_mae}, {"pooled_pseudo_r2", cv.pooled_pseudo_r2}};
}

json importance_json(const QuantileResult& q) {
  if (!q.importance) return nullptr;
  const auto& s = *q.importance;
  json shares = json::object();
  for (std::size_t j = 0; j < s.columns.size(); ++j) shares[s.columns[j]] = s.shares_pct[j];
  json out = {{"ranking", s.ranking}, {"shares_pct", shares}};
  out["stability_kendall_tau"] = s.stability_kendall_tau ? json(*s.stability_kendall_tau) : json(nullptr);
  if (q.stability) {
    out["stability_replicates"] = q.stability->rankings.size();
    out["stability_failed_replicates"] = q.stability->failed_replicates;
    out["stability_block_length"] = q.stability->block_length;
  }
  return out;
}

json full_json(const RunResult& result, bool include_attribution) {
  json episodes = json::array();
  for (const auto& er : result.episodes) {
    const auto& e = er.episode;
    json models = json::array();
    for (const auto& q : er.quantiles) {
      json coefs = json::object();
      for (std::size_t c = 0; c < q.model.columns.size(); ++c) coefs[q.model.columns[c]] = q.model.coefficients[c];
      json m = {{"tau", q.tau},
                {"intercept", q.model.intercept},
                {"coefficients", coefs},
                {"dropped", q.model.dropped},
                {"objective", q.model.objective},
                {"iterations", q.model.iterations},
                {"in_sample_pseudo_r2", nullptr},
                {"cv", q.cv ? cv_json(*q.cv) : json(nullptr)}};
      try {
        m["in_sample_pseudo_r2"] = qreg::pseudo_r2(q.model, er.design, q.tau);
      } catch (const Error&) {
      }
      if (include_attribution) m["importance"] = importance_json(q);
      models.push_back(std::move(m));
    }
    json residencies = json::array();
    for (const auto& r : er.residencies) {
      json fits = json::array();
      for (const auto& f : r.fits) fits.push_back(fit_json(f));
      residencies.push_back({{"residency", hedge::to_string(r.residency)},
                             {"report", report_json(r.report)},
                             {"copula",
                              {{"fits", fits},
                               {"selected", copula::to_string(r.selected->family)},
                               {"bootstrap",
                                {{"lo", r.interval.lo},
                                 {"hi", r.interval.hi},
                                 {"median", r.interval.median},
                                 {"block_length", r.interval.block_length},
                                 {"replications", r.interval.replicates.size()}}}}}});
    }
    episodes.push_back({{"country", e.country},
                        {"crisis_date", e.crisis_date},
                        {"crisis_month", e.crisis_month.to_string()},
                        {"window", {{"start", e.window_start.to_string()}, {"end", e.window_end.to_string()}}},
                        {"observations", er.window_months.size()},
                        {"returns_warnings", er.returns.warnings},
                        {"design",
                         {{"columns", er.design.columns},
                          {"rows", er.design.rows()},
                          {"dropped_rows", er.design.dropped_rows},
                          {"warnings", er.design.warnings}}},
                        {"quantile_models", models},
                        {"residencies", residencies},
                        {"diagnostics", er.diagnostics}});
  }
  json reports = json::array();
  for (const auto& r : result.reports) reports.push_back(report_json(r));
  return {{"schema_version", 1},
          {"provenance",
           {{"config_hash", result.provenance.config_hash},
            {"seed", result.provenance.seed},
            {"version", result.provenance.version}}},
          {"attribution_included", include_attribution},
          {"triplet", triplet_json(result.triplet)},
          {"reports", reports},
          {"episodes", episodes},
          {"diagnostics", result.diagnostics}};
}

std::string coefficients_csv(const RunResult& result) {
  std::string out = result.provenance.header_line() + "\ncountry,tau,term,coefficient,status\n";
  for (const auto& er : result.episodes) {
    for (const auto& q : er.quantiles) {
      const std::string prefix = csv_field(er.episode.country) + "," + num(q.tau) + ",";
      out += prefix + "(intercept)," + num(q.model.intercept) + ",kept\n";
      for (std::size_t c = 0; c < q.model.columns.size(); ++c) {
        const bool dropped = std::find(q.model.dropped.begin(), q.model.dropped.end(), q.model.columns[c]) !=
                             q.model.dropped.end();
        out += prefix + csv_field(q.model.columns[c]) + "," + num(q.model.coefficients[c]) + "," +
               (dropped ? "dropped" : "kept") + "\n";
      }
    }
  }
  return out;
}

std::string cv_csv(const RunResult& result) {
  std::string out = result.provenance.header_line() +
                    "\ncountry,tau,fold,last_train_month,first_test_month,test_rows,mae,pseudo_r2\n";
  for (const auto& er : result.episodes) {
    for (const auto& q : er.quantiles) {
      if (!q.cv) continue;
      const std::string prefix = csv_field(er.episode.country) + "," + num(q.tau) + ",";
      for (std::size_t k = 0; k < q.cv->folds.size(); ++k) {
        const auto& f = q.cv->folds[k];
        out += prefix + std::to_string(k + 1) + "," + f.last_train_month.to_string() + "," +
               f.first_test_month.to_string() + "," + std::to_string(f.test_end - f.test_begin) + "," + num(f.mae) +
               "," + num(f.pseudo_r2) + "\n";
      }
      out += prefix + "pooled,,,," + num(q.cv->pooled_mae) + "," + num(q.cv->pooled_pseudo_r2) + "\n";
    }
  }
  return out;
}

std::string attribution_csv(const RunResult& result) {
  std::string out = result.provenance.header_line() + "\ncountry,tau,month,term,value\n";
  for (const auto& er : result.episodes) {
    for (const auto& q : er.quantiles) {
      const std::string prefix = csv_field(er.episode.country) + "," + num(q.tau) + ",";
      for (const auto& a : q.attributions) {
        const std::string row = prefix + a.instance_month->to_string() + ",";
        out += row + "(baseline)," + num(a.phi0) + "\n";
        for (std::size_t j = 0; j < a.columns.size(); ++j) out += row + csv_field(a.columns[j]) + "," + num(a.phi[j]) + "\n";
        for (const auto& [i, j] : q.model.interactions) {
          out += row + csv_field(a.columns[i] + ":" + a.columns[j]) + "," +
                 num(a.phi_interactions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "\n";
        }
        out += row + "(prediction)," + num(a.prediction) + "\n";
      }
    }
  }
  return out;
}

json importance_file(const RunResult& result) {
  json out = json::array();
  for (const auto& er : result.episodes) {
    for (const auto& q : er.quantiles) {
      out.push_back({{"country", er.episode.country}, {"tau", q.tau}, {"summary", importance_json(q)}});
    }
  }
  return {{"schema_version", 1},
          {"provenance", {{"config_hash", result.provenance.config_hash}, {"seed", result.provenance.seed}}},
          {"importance", out}};
}

std::string returns_figure(const RunResult& result) {
  std::string out = result.provenance.header_line() +
                    "\ncountry,month,months_from_crisis,nominal,real_domestic,real_foreign\n";
  for (const auto& er : result.episodes) {
    const auto& r = er.returns;
    for (std::size_t i = 0; i < r.size(); ++i) {
      out += csv_field(er.episode.country) + "," + r.months[i].to_string() + "," +
             std::to_string(r.months[i] - er.episode.crisis_month) + "," + num(r.nominal[i]) + "," +
             num(r.real_domestic[i]) + "," + num(r.real_foreign[i]) + "\n";
    }
  }
  return out;
}

std::string risk_return_figure(const RunResult& result) {
  std::string out = result.provenance.header_line() +
                    "\ncountry,residents,mean_net_real_pct,sd_net_real_pct,erosion_pct,hedge_eff_pct\n";
  for (const auto& er : result.episodes) {
    for (const auto& r : er.residencies) {
      const double sd = r.net.size() > 1 ? 100.0 * std::sqrt(stats::sample_variance(r.net)) : 0.0;
      out += csv_field(er.episode.country) + "," + hedge::display_name(r.residency) + "," +
             num(r.report.mean_net_real_pct) + "," + num(sd) + "," + num(r.report.mean_erosion_pct) + "," +
             (r.report.diagnostic.empty() ? num(r.report.hedge_effectiveness_pct) : "NA") + "\n";
    }
  }
  return out;
}

std::string importance_figure(const RunResult& result) {
  std::string out = result.provenance.header_line() + "\ncountry,tau,rank,feature,share_pct\n";
  for (const auto& er : result.episodes) {
    for (const auto& q : er.quantiles) {
      if (!q.importance) continue;
      const auto& s = *q.importance;
      for (std::size_t k = 0; k < s.ranking.size(); ++k) {
        const auto j = static_cast<std::size_t>(std::find(s.columns.begin(), s.columns.end(), s.ranking[k]) -
                                                s.columns.begin());
        out += csv_field(er.episode.country) + "," + num(q.tau) + "," + std::to_string(k + 1) + "," +
               csv_field(s.ranking[k]) + "," + num(s.shares_pct[j]) + "\n";
      }
    }
  }
  return out;
}

void write_hedge_stage(const RunResult& result, const fs::path& dir) {
  atomic_write(dir / "report.csv", report_csv(result.reports, result.provenance));
  atomic_write(dir / "report.full", full_json(result, false).dump(2) + "\n");
}

}  // namespace

std::string Provenance::header_line() const {
  return "# hedgefx " + version + " config=" + config_hash + " seed=" + std::to_string(seed);
}

Provenance provenance_for(const RunConfig& config) {
  std::uint64_t h = fnv1a(config.text);
  for (const auto& e : config.episodes) {
    h = stage(e.country, [&] {
      std::uint64_t eh = fnv1a(read_bytes(e.series_manifest), h);
      for (const auto& entry : dataio::load_manifest(e.series_manifest).entries) eh = fnv1a(read_bytes(entry.path), eh);
      return eh;
    });
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  Provenance p;
  p.config_hash = buf;
  p.seed = config.seed;
  return p;
}

fs::path resolve_output_dir(const RunConfig& config, const std::optional<fs::path>& cli) {
  if (cli) return *cli;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  if (config.output_dir) return *config.output_dir;
  return "out";
}

std::string report_csv(const std::vector<hedge::HedgeReport>& reports, const Provenance& provenance) {
  std::string out = provenance.header_line() +
                    "\nCountry,Residents,Crisis Date,Hedge Eff. (%),Erosion (%),Net Real (%),Tail Dependence\n";
  for (const auto& r : reports) {
    out += csv_field(r.country) + "," + hedge::display_name(r.residency) + "," + csv_field(r.crisis_date) + "," +
           (r.diagnostic.empty() ? fixed(r.hedge_effectiveness_pct, 1) : "NA") + "," +
           fixed(r.mean_erosion_pct, 2) + "," + fixed(r.mean_net_real_pct, 2) + "," + fixed(r.tail_dependence, 2) +
           "\n";
  }
  return out;
}

RunResult run_pipeline(const RunConfig& config, const RunOptions& options) {
  RunResult result;
  result.provenance = provenance_for(config);

  std::vector<Prepared> prepared;
  for (const auto& e : config.episodes) prepared.push_back(prepare(e));

  std::map<std::string, std::vector<double>> per_country;
  for (const auto& p : prepared) per_country[p.episode->country] = p.window_nominal;
  try {
    result.triplet = tailsel::build_triplet(per_country, options.tau_low_override);
  } catch (const Error& e) {
    throw Error(e.kind(), e.module(), std::string(e.what()).substr(e.module().size() + 2));
  }
  for (const auto& w : result.triplet.warnings) result.diagnostics.push_back(w);

  for (const auto& p : prepared) {
    EpisodeResult er;
    er.episode = *p.episode;
    er.returns = p.returns;
    er.window_months = p.window_months;
    er.window_nominal = p.window_nominal;
    for (const auto& w : p.panel.warnings) er.diagnostics.push_back(w);
    for (const auto& w : p.returns.warnings) er.diagnostics.push_back(w);

    er.design = stage(er.episode.country, [&] { return build_design(p); });
    for (const auto& w : er.design.warnings) er.diagnostics.push_back(w);
    // An episode-level override replaces the regression quantiles only; the
    // tail threshold for dependence and the report stays the unified one.
    std::vector<double> taus = er.episode.quantile_override;
    if (taus.empty()) taus = {result.triplet.tau_low, result.triplet.tau_mid, result.triplet.tau_high};
    for (double tau : taus) {
      er.quantiles.push_back(
          stage(er.episode.country, [&] { return fit_tau(config, p, er.design, tau, er.diagnostics); }));
    }
    for (auto residency : er.episode.residency) {
      er.residencies.push_back(analyse_residency(config, p, residency, result.triplet));
      const auto& report = er.residencies.back().report;
      if (!report.diagnostic.empty()) er.diagnostics.push_back(report.diagnostic);
      for (const auto& n : report.notes) er.diagnostics.push_back(er.episode.country + ": " + n);
      result.reports.push_back(report);
    }
    result.episodes.push_back(std::move(er));
  }

  if (options.output_dir) write_hedge_stage(result, *options.output_dir);

  if (options.attribution && config.attribution.enabled) {
    for (auto& er : result.episodes) {
      try {
        attribute(config, er);
      } catch (const Error& e) {
        er.diagnostics.push_back("attribution failed: " + std::string(e.what()));
      }
    }
  }
  for (const auto& er : result.episodes) {
    for (const auto& d : er.diagnostics) result.diagnostics.push_back(d);
  }
  if (options.output_dir) write_run_outputs(result, *options.output_dir, options.attribution && config.attribution.enabled);
  return result;
}

void write_run_outputs(const RunResult& result, const fs::path& dir, bool include_attribution) {
  atomic_write(dir / "report.csv", report_csv(result.reports, result.provenance));
  atomic_write(dir / "coefficients.csv", coefficients_csv(result));
  atomic_write(dir / "cv.csv", cv_csv(result));
  atomic_write(dir / "figures" / "real_returns_around_crisis.csv", returns_figure(result));
  atomic_write(dir / "figures" / "risk_return.csv", risk_return_figure(result));
  if (include_attribution) {
    atomic_write(dir / "attribution.csv", attribution_csv(result));
    atomic_write(dir / "importance.json", importance_file(result).dump(2) + "\n");
    atomic_write(dir / "figures" / "importance_bars.csv", importance_figure(result));
  }
  atomic_write(dir / "report.full", full_json(result, include_attribution).dump(2) + "\n");
}

SweepResult sensitivity_sweep(const RunConfig& config, const std::vector<double>& taus) {
  if (taus.empty()) throw config_error("sweep needs at least one tau");
  SweepResult out;
  RunOptions base_options;
  base_options.attribution = false;
  const RunResult base = run_pipeline(config, base_options);
  out.base_triplet = base.triplet;
  out.base_reports = base.reports;
  out.provenance = base.provenance;

  for (double tau : taus) {
    std::string reason;
    if (!(tau > 0.0 && tau < 0.5)) {
      reason = "not a left-tail quantile (must lie in (0, 0.5))";
    } else {
      for (const auto& er : base.episodes) {
        const auto count = tailsel::tail_count(er.window_nominal, tau);
        if (count < tailsel::kDefaultMinTailCount) {
          reason = er.episode.country + " has " + std::to_string(count) + " tail observations, below " +
                   std::to_string(tailsel::kDefaultMinTailCount);
          break;
        }
      }
    }
    std::optional<RunResult> run;
    if (reason.empty()) {
      RunOptions o;
      o.attribution = false;
      o.tau_low_override = tau;
      try {
        run = run_pipeline(config, o);
      } catch (const Error& e) {
        reason = e.what();
      }
    }
    for (std::size_t k = 0; k < base.reports.size(); ++k) {
      const auto& b = base.reports[k];
      SweepRow row;
      row.country = b.country;
      row.residency = b.residency;
      row.tau = tau;
      if (!run) {
        row.reason = reason;
      } else {
        const auto& r = run->reports[k];
        row.feasible = true;
        row.he_pct = r.hedge_effectiveness_pct;
        row.tail_dependence = r.tail_dependence;
        row.empirical_tail_dependence = r.empirical_tail_dependence;
        row.delta_he_pct = r.hedge_effectiveness_pct - b.hedge_effectiveness_pct;
        row.delta_tail_dependence = r.tail_dependence - b.tail_dependence;
        if (!r.diagnostic.empty()) row.reason = r.diagnostic;
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

void write_sweep(const SweepResult& result, const fs::path& dir) {
  std::string out = result.provenance.header_line() +
                    "\ncountry,residents,tau,status,hedge_eff_pct,tail_dependence,empirical_tail_dependence,"
                    "delta_hedge_eff_pct,delta_tail_dependence,reason\n";
  for (const auto& b : result.base_reports) {
    out += csv_field(b.country) + "," + hedge::display_name(b.residency) + "," + num(result.base_triplet.tau_low) +
           ",base," + num(b.hedge_effectiveness_pct) + "," + num(b.tail_dependence) + "," +
           num(b.empirical_tail_dependence) + ",0,0," + csv_field(b.diagnostic) + "\n";
  }
  for (const auto& r : result.rows) {
    out += csv_field(r.country) + "," + hedge::display_name(r.residency) + "," + num(r.tau) + "," +
           (r.feasible ? "ok" : "infeasible") + ",";
    if (r.feasible) {
      out += num(r.he_pct) + "," + num(r.tail_dependence) + "," + num(r.empirical_tail_dependence) + "," +
             num(r.delta_he_pct) + "," + num(r.delta_tail_dependence);
    } else {
      out += ",,,,";
    }
    out += "," + csv_field(r.reason) + "\n";
  }
  atomic_write(dir / "sweep.csv", out);
}

}  // namespace hedgefx::pipeline
