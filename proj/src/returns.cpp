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

#include "hedgefx/returns.hpp"

#include <cmath>

#include "hedgefx/error.hpp"

namespace hedgefx::returns {
namespace {
constexpr const char* kModule = "returns";
}

double nominal_return(double p_t, double p_prev) {
  if (!(p_t > 0.0) || !(p_prev > 0.0)) throw invalid_argument(kModule, "non-positive price");
  return p_t / p_prev - 1.0;
}

double real_return_domestic(double r_nom, double pi) {
  if (!(pi > -1.0)) throw invalid_argument(kModule, "inflation rate must exceed -1");
  if (!(r_nom > -1.0)) throw invalid_argument(kModule, "nominal return must exceed -1");
  return (1.0 + r_nom) / (1.0 + pi) - 1.0;
}

double real_return_foreign(double r_nom, double e_prev, double e_t, double pi) {
  if (!(e_prev > 0.0) || !(e_t > 0.0)) throw invalid_argument(kModule, "non-positive exchange rate");
  if (!(pi > -1.0)) throw invalid_argument(kModule, "inflation rate must exceed -1");
  if (!(r_nom > -1.0)) throw invalid_argument(kModule, "nominal return must exceed -1");
  return (1.0 + r_nom) * (e_prev / e_t) / (1.0 + pi) - 1.0;
}

std::vector<PriceObservation> align_prices(const dataio::MacroSeries& index, const dataio::MacroSeries& fx) {
  std::vector<PriceObservation> out;
  for (const auto& obs : index.observations) {
    if (auto e = fx.at(obs.month)) out.push_back({obs.month, obs.value, *e});
  }
  return out;
}

ReturnSeries build_return_series(const std::vector<PriceObservation>& prices,
                                 const dataio::MacroSeries& inflation) {
  if (prices.size() < 2) throw data_error(kModule, "fewer than 2 aligned price months");
  ReturnSeries out;
  for (std::size_t i = 1; i < prices.size(); ++i) {
    const auto& prev = prices[i - 1];
    const auto& cur = prices[i];
    if (cur.month <= prev.month) throw data_error(kModule, "price months not increasing at " + cur.month.to_string());
    if (cur.month - prev.month != 1) {
      out.warnings.push_back("returns: " + cur.month.to_string() + " dropped (previous month missing)");
      continue;
    }
    const auto pi = inflation.at(cur.month);
    if (!pi) {
      out.warnings.push_back("returns: " + cur.month.to_string() + " dropped (inflation missing)");
      continue;
    }
    try {
      const double r = nominal_return(cur.index_level, prev.index_level);
      out.months.push_back(cur.month);
      out.nominal.push_back(r);
      out.real_domestic.push_back(real_return_domestic(r, *pi));
      out.real_foreign.push_back(real_return_foreign(r, prev.fx_rate, cur.fx_rate, *pi));
    } catch (const Error& e) {
      throw data_error(kModule, cur.month.to_string() + ": " + e.what());
    }
  }
  if (out.months.empty()) {
    throw data_error(kModule, "fewer than 2 overlapping months of prices, FX and inflation");
  }
  return out;
}

}  // namespace hedgefx::returns
