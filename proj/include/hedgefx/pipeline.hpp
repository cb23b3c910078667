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

// End-to-end orchestration of crisis episodes: data fusion, returns, tail
// quantiles, quantile regression, copula tail dependence, hedge
// effectiveness and attribution, plus report emission and tau sweeps.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hedgefx/attribution.hpp"
#include "hedgefx/config.hpp"
#include "hedgefx/copula.hpp"
#include "hedgefx/hedge.hpp"
#include "hedgefx/qreg.hpp"
#include "hedgefx/returns.hpp"
#include "hedgefx/tailsel.hpp"

namespace hedgefx::pipeline {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutputDirEnv = "HEDGEFX_OUT_DIR";

struct Provenance {
  std::string config_hash;  // FNV-1a 64 over config and every input file, hex
  std::uint64_t seed = 0;
  std::string version = kVersion;

  // "# hedgefx <version> config=<hash> seed=<seed>"
  std::string header_line() const;
};

struct ResidencyResult {
  hedge::Residency residency = hedge::Residency::kLocal;
  std::vector<copula::CopulaFit> fits;  // Clayton, Gumbel, Frank
  std::optional<copula::CopulaFit> selected;
  copula::BootstrapInterval interval;
  std::vector<double> loss;  // window months
  std::vector<double> net;
  hedge::HedgeReport report;
};

struct QuantileResult {
  double tau = 0.5;
  qreg::QuantileModel model;
  std::optional<qreg::CvReport> cv;
  std::vector<attribution::AttributionResult> attributions;
  std::optional<attribution::ImportanceSummary> importance;
  std::optional<attribution::StabilityReport> stability;
};

struct EpisodeResult {
  Episode episode;
  returns::ReturnSeries returns;      // every month with a return
  std::vector<MonthStamp> window_months;
  std::vector<double> window_nominal;
  qreg::DesignMatrix design;
  std::vector<QuantileResult> quantiles;  // the triplet, or the episode override
  std::vector<ResidencyResult> residencies;
  std::vector<std::string> diagnostics;
};

struct RunResult {
  tailsel::TailQuantileTriplet triplet;
  std::vector<EpisodeResult> episodes;
  std::vector<hedge::HedgeReport> reports;  // canonical order: config order, foreign first
  std::vector<std::string> diagnostics;
  Provenance provenance;
};

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;  // nothing is written when unset
  std::optional<double> tau_low_override;
  bool attribution = true;
};

// Resolves the output directory: explicit > $HEDGEFX_OUT_DIR > config > ./out.
std::filesystem::path resolve_output_dir(const RunConfig& config, const std::optional<std::filesystem::path>& cli);

Provenance provenance_for(const RunConfig& config);

// Runs every episode. Hedge reports are written (atomically) before the
// attribution stage, so a later failure cannot corrupt them. Hard errors
// propagate as hedgefx::Error with the failing module and episode.
RunResult run_pipeline(const RunConfig& config, const RunOptions& options = {});

struct SweepRow {
  std::string country;
  hedge::Residency residency = hedge::Residency::kLocal;
  double tau = 0.0;
  bool feasible = false;
  std::string reason;  // why an infeasible tau was skipped
  double he_pct = 0.0;
  double tail_dependence = 0.0;
  double empirical_tail_dependence = 0.0;
  double delta_he_pct = 0.0;               // versus the base run
  double delta_tail_dependence = 0.0;
};

struct SweepResult {
  tailsel::TailQuantileTriplet base_triplet;
  std::vector<hedge::HedgeReport> base_reports;
  std::vector<SweepRow> rows;
  Provenance provenance;
};

// Re-runs the pipeline (without attribution) with tau_low overridden by each
// value. Infeasible values are listed with a reason and the sweep continues.
SweepResult sensitivity_sweep(const RunConfig& config, const std::vector<double>& taus);

// Writers. Every file is written to a temporary name and renamed into place.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir, bool include_attribution);
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);

// Table-1 CSV text (provenance line, header, one row per report).
std::string report_csv(const std::vector<hedge::HedgeReport>& reports, const Provenance& provenance);

}  // namespace hedgefx::pipeline
