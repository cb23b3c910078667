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

#include "hedgefx/hedge.hpp"

#include <algorithm>
#include <cmath>

#include "hedgefx/error.hpp"
#include "hedgefx/stats.hpp"

namespace hedgefx::hedge {
namespace {
constexpr const char* kModule = "hedge";
}

const char* to_string(Residency r) { return r == Residency::kLocal ? "local" : "foreign"; }
const char* display_name(Residency r) { return r == Residency::kLocal ? "Local" : "Foreign"; }

LossSeries loss_series(const dataio::MacroSeries& pi, const dataio::MacroSeries& fx, Residency residency) {
  LossSeries out;
  out.residency = residency;
  const auto& obs = fx.observations;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    if (obs[i].month - obs[i - 1].month != 1) continue;
    if (!(obs[i].value > 0.0) || !(obs[i - 1].value > 0.0)) {
      throw data_error(kModule, "non-positive FX level near " + obs[i].month.to_string());
    }
    const auto p = pi.at(obs[i].month);
    if (!p) throw data_error(kModule, "misaligned months: no inflation for " + obs[i].month.to_string());
    const double fx_ret = residency == Residency::kForeign ? obs[i].value / obs[i - 1].value - 1.0 : 0.0;
    out.months.push_back(obs[i].month);
    out.components.push_back({*p, fx_ret});
    out.loss.push_back(*p + fx_ret);
  }
  if (out.months.empty()) throw data_error(kModule, "no months with consecutive FX levels");
  return out;
}

LossSeries restrict(const LossSeries& loss, MonthStamp first, MonthStamp last) {
  LossSeries out;
  out.residency = loss.residency;
  for (std::size_t i = 0; i < loss.months.size(); ++i) {
    if (loss.months[i] < first || loss.months[i] > last) continue;
    out.months.push_back(loss.months[i]);
    out.loss.push_back(loss.loss[i]);
    out.components.push_back(loss.components[i]);
  }
  return out;
}

std::vector<double> net_real_return(std::span<const double> nominal, const LossSeries& loss) {
  if (nominal.size() != loss.loss.size()) {
    throw invalid_argument(kModule, "net_real_return: " + std::to_string(nominal.size()) + " returns vs " +
                                        std::to_string(loss.loss.size()) + " loss months");
  }
  std::vector<double> net(nominal.size());
  for (std::size_t i = 0; i < net.size(); ++i) net[i] = nominal[i] - loss.loss[i];
  return net;
}

double hedge_effectiveness(std::span<const double> net, std::span<const double> loss) {
  if (net.size() != loss.size()) throw invalid_argument(kModule, "hedge_effectiveness: length mismatch");
  if (net.size() < 2) throw invalid_argument(kModule, "hedge_effectiveness: needs at least 2 observations");
  const double var_loss = stats::sample_variance(loss);
  // Round-off leaves a constant series with variance around eps^2 times its
  // mean square; that is still zero.
  double mean_sq = 0.0;
  for (double l : loss) mean_sq += l * l;
  mean_sq /= static_cast<double>(loss.size());
  if (!(var_loss > 1e-24 * mean_sq)) {
    throw numerical_error(kModule, "hedge effectiveness undefined: loss variance is zero over " +
                                       std::to_string(loss.size()) + " months");
  }
  const double var_net = stats::sample_variance(net);
  return std::max(0.0, 1.0 - var_net / var_loss);
}

HedgeReport build_hedge_report(const std::string& country, const std::string& crisis_date,
                               std::span<const MonthStamp> nominal_months, std::span<const double> nominal,
                               const LossSeries& loss, const TailDependenceInput& taildep,
                               const tailsel::TailQuantileTriplet& triplet) {
  if (nominal_months.size() != nominal.size() || nominal_months.size() != loss.months.size() ||
      !std::equal(nominal_months.begin(), nominal_months.end(), loss.months.begin())) {
    throw data_error(kModule, country + "/" + to_string(loss.residency) + ": return and loss windows differ");
  }
  if (nominal.empty()) throw data_error(kModule, country + ": empty window");

  HedgeReport r;
  r.country = country;
  r.residency = loss.residency;
  r.crisis_date = crisis_date;
  r.observations = nominal.size();
  r.quantile_triplet = triplet;
  r.copula_family = taildep.family;
  r.tail_dependence = taildep.lambda_lower;
  r.tail_dependence_ci = taildep.ci;
  r.empirical_tail_dependence = taildep.empirical;

  const auto net = net_real_return(nominal, loss);
  r.mean_erosion_pct = 100.0 * stats::mean(loss.loss);
  r.mean_net_real_pct = 100.0 * stats::mean(net);
  r.mean_nominal_pct = 100.0 * stats::mean(nominal);
  try {
    r.hedge_effectiveness_pct = 100.0 * hedge_effectiveness(net, loss.loss);
  } catch (const Error& e) {
    r.hedge_effectiveness_pct = 0.0;
    r.diagnostic = e.what();
  }
  const auto [lo, hi] = taildep.ci;
  if (!(lo <= taildep.lambda_lower && taildep.lambda_lower <= hi)) {
    r.notes.push_back("hedge: tail dependence interval does not contain the point estimate");
  }
  return r;
}

}  // namespace hedgefx::hedge
