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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hedgefx/dataio.hpp"
#include "hedgefx/month.hpp"
#include "hedgefx/tailsel.hpp"

namespace hedgefx::hedge {

enum class Residency { kLocal, kForeign };

const char* to_string(Residency r);        // "local" / "foreign"
const char* display_name(Residency r);     // "Local" / "Foreign"

struct LossComponents {
  double pi = 0.0;
  double fx_ret = 0.0;  // always zero for local residency
};

// Purchasing-power loss per month: inflation, plus FX depreciation for
// foreign residents. Fractions, additive.
struct LossSeries {
  std::vector<MonthStamp> months;
  std::vector<double> loss;
  Residency residency = Residency::kLocal;
  std::vector<LossComponents> components;
};

// R^FX_t = e_t / e_{t-1} - 1 with e in local currency per USD, so
// depreciation is a positive loss. Output months are those with FX levels in
// both t-1 and t; each must have an inflation value.
LossSeries loss_series(const dataio::MacroSeries& pi, const dataio::MacroSeries& fx, Residency residency);

// Restricts a loss series to months in [first, last].
LossSeries restrict(const LossSeries& loss, MonthStamp first, MonthStamp last);

// R^net_t = R^nominal_t - Loss_t, elementwise.
std::vector<double> net_real_return(std::span<const double> nominal, const LossSeries& loss);

// max(0, 1 - Var(net) / Var(loss)) with unbiased variances.
double hedge_effectiveness(std::span<const double> net, std::span<const double> loss);

struct HedgeReport {
  std::string country;
  Residency residency = Residency::kLocal;
  std::string crisis_date;  // as given in the episode config, day precision
  double hedge_effectiveness_pct = 0.0;
  double mean_erosion_pct = 0.0;
  double mean_net_real_pct = 0.0;
  double mean_nominal_pct = 0.0;
  double tail_dependence = 0.0;
  std::pair<double, double> tail_dependence_ci{0.0, 0.0};
  double empirical_tail_dependence = 0.0;
  std::string copula_family;
  tailsel::TailQuantileTriplet quantile_triplet;
  std::size_t observations = 0;
  // Set when HE is undefined (zero loss variance); the row is then a
  // diagnostic row and hedge_effectiveness_pct is meaningless.
  std::string diagnostic;
  // Non-fatal remarks, e.g. an interval that misses its point estimate.
  std::vector<std::string> notes;
};

struct TailDependenceInput {
  std::string family;
  double lambda_lower = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
  double empirical = 0.0;
};

// Assembles one Table-1 row. `nominal_months`/`nominal` and `loss` must cover
// the same months (window mismatch is a data error). A zero-variance loss
// yields a diagnostic row rather than an exception.
HedgeReport build_hedge_report(const std::string& country, const std::string& crisis_date,
                               std::span<const MonthStamp> nominal_months, std::span<const double> nominal,
                               const LossSeries& loss, const TailDependenceInput& taildep,
                               const tailsel::TailQuantileTriplet& triplet);

}  // namespace hedgefx::hedge
