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

#include "hedgefx/hedgefx.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hedgefx/config.hpp"
#include "hedgefx/copula.hpp"
#include "hedgefx/dataio.hpp"
#include "hedgefx/error.hpp"
#include "hedgefx/fixture.hpp"
#include "hedgefx/hedge.hpp"
#include "hedgefx/pipeline.hpp"
#include "hedgefx/qreg.hpp"
#include "hedgefx/returns.hpp"
#include "hedgefx/stats.hpp"
#include "hedgefx/tailsel.hpp"

struct hfx_run {
  hedgefx::pipeline::RunResult result;
  std::string output_dir;
  std::string report_csv;
};

struct hfx_sweep {
  hedgefx::pipeline::SweepResult result;
  std::string output_dir;
};

namespace {

using hedgefx::Error;
using hedgefx::ErrorKind;
namespace pl = hedgefx::pipeline;

thread_local std::string g_last_error;

hfx_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return HFX_ERR_INVALID_ARGUMENT;
    case ErrorKind::kConfig: return HFX_ERR_CONFIG;
    case ErrorKind::kData: return HFX_ERR_DATA;
    case ErrorKind::kNumerical: return HFX_ERR_NUMERICAL;
  }
  return HFX_ERR_INTERNAL;
}

hfx_status fail(hfx_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
hfx_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return HFX_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(HFX_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HFX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HFX_ERR_INTERNAL, e.what());
  }
}

hfx_run_options defaults() {
  hfx_run_options o;
  hfx_run_options_init(&o);
  return o;
}

pl::RunConfig load(const char* path, const hfx_run_options& o) {
  if (path == nullptr) throw hedgefx::invalid_argument("capi", "config path is null");
  auto config = pl::load_config(path);
  if (o.fast) pl::apply_fast_profile(config);
  return config;
}

std::optional<std::filesystem::path> cli_dir(const hfx_run_options& o) {
  if (o.output_dir == nullptr || *o.output_dir == '\0') return std::nullopt;
  return std::filesystem::path(o.output_dir);
}

std::span<const double> view(const double* p, std::size_t n) {
  if (p == nullptr && n > 0) throw hedgefx::invalid_argument("capi", "null array");
  return {p, n};
}

}  // namespace

extern "C" {

const char* hfx_version(void) { return pl::kVersion; }

const char* hfx_last_error(void) { return g_last_error.c_str(); }

void hfx_run_options_init(hfx_run_options* options) {
  if (options == nullptr) return;
  options->output_dir = nullptr;
  options->fast = 0;
  options->attribution = 1;
  options->write_outputs = 1;
}

hfx_status hfx_validate_config(const char* config_path, size_t* episode_count) {
  return guarded([&] {
    const auto config = load(config_path, defaults());
    for (const auto& e : config.episodes) hedgefx::dataio::load_manifest(e.series_manifest);
    if (episode_count != nullptr) *episode_count = config.episodes.size();
  });
}

hfx_status hfx_run_create(const char* config_path, const hfx_run_options* options, hfx_run** out) {
  if (out == nullptr) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: output handle is null");
  *out = nullptr;
  const hfx_run_options o = options ? *options : defaults();
  return guarded([&] {
    const auto config = load(config_path, o);
    auto run = std::make_unique<hfx_run>();
    pl::RunOptions ro;
    ro.attribution = o.attribution != 0;
    if (o.write_outputs) {
      const auto dir = pl::resolve_output_dir(config, cli_dir(o));
      ro.output_dir = dir;
      run->output_dir = dir.string();
    }
    run->result = pl::run_pipeline(config, ro);
    run->report_csv = pl::report_csv(run->result.reports, run->result.provenance);
    *out = run.release();
  });
}

void hfx_run_free(hfx_run* run) { delete run; }

size_t hfx_run_report_count(const hfx_run* run) { return run ? run->result.reports.size() : 0; }

hfx_status hfx_run_report(const hfx_run* run, size_t index, hfx_report_row* out) {
  if (run == nullptr || out == nullptr) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: null argument");
  if (index >= run->result.reports.size()) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: report index out of range");
  const auto& r = run->result.reports[index];
  out->country = r.country.c_str();
  out->residents = hedgefx::hedge::display_name(r.residency);
  out->crisis_date = r.crisis_date.c_str();
  out->copula_family = r.copula_family.c_str();
  out->diagnostic = r.diagnostic.c_str();
  out->hedge_effectiveness_pct = r.diagnostic.empty() ? r.hedge_effectiveness_pct : NAN;
  out->erosion_pct = r.mean_erosion_pct;
  out->net_real_pct = r.mean_net_real_pct;
  out->tail_dependence = r.tail_dependence;
  out->tail_dependence_lo = r.tail_dependence_ci.first;
  out->tail_dependence_hi = r.tail_dependence_ci.second;
  out->empirical_tail_dependence = r.empirical_tail_dependence;
  out->observations = r.observations;
  return HFX_OK;
}

hfx_status hfx_run_triplet(const hfx_run* run, double* tau_low, double* tau_mid, double* tau_high) {
  if (run == nullptr) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: null run");
  if (tau_low) *tau_low = run->result.triplet.tau_low;
  if (tau_mid) *tau_mid = run->result.triplet.tau_mid;
  if (tau_high) *tau_high = run->result.triplet.tau_high;
  return HFX_OK;
}

size_t hfx_run_diagnostic_count(const hfx_run* run) { return run ? run->result.diagnostics.size() : 0; }

const char* hfx_run_diagnostic(const hfx_run* run, size_t index) {
  if (run == nullptr || index >= run->result.diagnostics.size()) return nullptr;
  return run->result.diagnostics[index].c_str();
}

const char* hfx_run_output_dir(const hfx_run* run) { return run ? run->output_dir.c_str() : nullptr; }

const char* hfx_run_report_csv(const hfx_run* run) { return run ? run->report_csv.c_str() : nullptr; }

hfx_status hfx_sweep_create(const char* config_path, const double* taus, size_t tau_count,
                            const hfx_run_options* options, hfx_sweep** out) {
  if (out == nullptr) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: output handle is null");
  *out = nullptr;
  const hfx_run_options o = options ? *options : defaults();
  return guarded([&] {
    const auto tau_view = view(taus, tau_count);
    const auto config = load(config_path, o);
    auto sweep = std::make_unique<hfx_sweep>();
    sweep->result = pl::sensitivity_sweep(config, std::vector<double>(tau_view.begin(), tau_view.end()));
    if (o.write_outputs) {
      const auto dir = pl::resolve_output_dir(config, cli_dir(o));
      pl::write_sweep(sweep->result, dir);
      sweep->output_dir = dir.string();
    }
    *out = sweep.release();
  });
}

void hfx_sweep_free(hfx_sweep* sweep) { delete sweep; }

size_t hfx_sweep_row_count(const hfx_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

hfx_status hfx_sweep_row_at(const hfx_sweep* sweep, size_t index, hfx_sweep_row* out) {
  if (sweep == nullptr || out == nullptr) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: null argument");
  if (index >= sweep->result.rows.size()) return fail(HFX_ERR_INVALID_ARGUMENT, "capi: sweep index out of range");
  const auto& r = sweep->result.rows[index];
  out->country = r.country.c_str();
  out->residents = hedgefx::hedge::display_name(r.residency);
  out->reason = r.reason.c_str();
  out->tau = r.tau;
  out->feasible = r.feasible ? 1 : 0;
  out->hedge_effectiveness_pct = r.he_pct;
  out->tail_dependence = r.tail_dependence;
  out->empirical_tail_dependence = r.empirical_tail_dependence;
  out->delta_hedge_effectiveness_pct = r.delta_he_pct;
  out->delta_tail_dependence = r.delta_tail_dependence;
  return HFX_OK;
}

const char* hfx_sweep_output_dir(const hfx_sweep* sweep) { return sweep ? sweep->output_dir.c_str() : nullptr; }

hfx_status hfx_fixture_generate(const char* kind, size_t n, uint64_t seed, double theta, const char* out_dir) {
  return guarded([&] {
    if (kind == nullptr || out_dir == nullptr) throw hedgefx::invalid_argument("capi", "null argument");
    const auto k = hedgefx::fixture::parse_kind(kind);
    if (!k) throw hedgefx::invalid_argument("fixture", std::string("unknown fixture kind '") + kind + "'");
    hedgefx::fixture::Options o;
    o.n = n;
    o.seed = seed;
    o.theta = theta;
    hedgefx::fixture::generate(*k, o, out_dir);
  });
}

hfx_status hfx_real_return_domestic(double r_nominal, double pi, double* out) {
  return guarded([&] { *out = hedgefx::returns::real_return_domestic(r_nominal, pi); });
}

hfx_status hfx_real_return_foreign(double r_nominal, double fx_prev, double fx_now, double pi, double* out) {
  return guarded([&] { *out = hedgefx::returns::real_return_foreign(r_nominal, fx_prev, fx_now, pi); });
}

hfx_status hfx_hedge_effectiveness(const double* net, const double* loss, size_t n, double* out) {
  return guarded([&] { *out = hedgefx::hedge::hedge_effectiveness(view(net, n), view(loss, n)); });
}

hfx_status hfx_min_tail_quantile(const double* returns, size_t n, size_t min_count, double* out) {
  return guarded([&] { *out = hedgefx::tailsel::min_feasible_tail_quantile(view(returns, n), min_count); });
}

hfx_status hfx_empirical_quantile(const double* x, size_t n, double tau, double* out) {
  return guarded([&] { *out = hedgefx::stats::empirical_quantile(view(x, n), tau); });
}

hfx_status hfx_check_loss(double u, double tau, double* out) {
  return guarded([&] { *out = hedgefx::qreg::check_loss(u, tau); });
}

hfx_status hfx_clayton_lower_tail(double theta, double* out) {
  return guarded([&] { *out = hedgefx::copula::lower_tail_dependence(hedgefx::copula::Family::kClayton, theta); });
}

}  // extern "C"
