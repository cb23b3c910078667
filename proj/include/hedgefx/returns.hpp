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

#include <string>
#include <vector>

#include "hedgefx/dataio.hpp"
#include "hedgefx/month.hpp"

namespace hedgefx::returns {

// End-of-month levels. Inflation is supplied separately as a (possibly
// fused) month-over-month rate series.
struct PriceObservation {
  MonthStamp month;
  double index_level = 0.0;  // local currency
  double fx_rate = 0.0;      // local currency per USD
};

// Returns are fractions. The first price month has no return.
struct ReturnSeries {
  std::vector<MonthStamp> months;
  std::vector<double> nominal;
  std::vector<double> real_domestic;
  std::vector<double> real_foreign;
  std::vector<std::string> warnings;

  std::size_t size() const { return months.size(); }
};

// p_t / p_prev - 1.
double nominal_return(double p_t, double p_prev);

// (1 + r) / (1 + pi) - 1. Exact Fisher deflation, never r - pi.
double real_return_domestic(double r_nom, double pi);

// (1 + r) (e_prev / e_t) / (1 + pi) - 1, with e in local currency per USD.
double real_return_foreign(double r_nom, double e_prev, double e_t, double pi);

// Joins index and FX levels on common months.
std::vector<PriceObservation> align_prices(const dataio::MacroSeries& index, const dataio::MacroSeries& fx);

// Applies the three return formulas month by month. A month is kept only
// when it, its predecessor month, and the inflation rate are all present;
// skipped months are reported in `warnings`, never imputed.
ReturnSeries build_return_series(const std::vector<PriceObservation>& prices,
                                 const dataio::MacroSeries& inflation);

}  // namespace hedgefx::returns
