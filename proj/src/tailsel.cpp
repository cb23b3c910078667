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

#include "hedgefx/tailsel.hpp"

#include <algorithm>
#include <cstdio>

#include "hedgefx/error.hpp"
#include "hedgefx/stats.hpp"

namespace hedgefx::tailsel {
namespace {
constexpr const char* kModule = "tailsel";
}

double min_feasible_tail_quantile(std::span<const double> returns, std::size_t min_count) {
  if (min_count == 0) throw invalid_argument(kModule, "min_count must be positive");
  if (returns.size() < min_count) {
    throw data_error(kModule, "sample of " + std::to_string(returns.size()) + " observations cannot hold " +
                                  std::to_string(min_count) + " tail observations");
  }
  return static_cast<double>(min_count) / static_cast<double>(returns.size());
}

double unify_tail_quantile(const std::map<std::string, double>& per_country) {
  if (per_country.empty()) throw invalid_argument(kModule, "no countries to unify");
  double best = per_country.begin()->second;
  for (const auto& [_, tau] : per_country) best = std::max(best, tau);
  return best;
}

std::size_t tail_count(std::span<const double> returns, double tau) {
  const double cutoff = stats::empirical_quantile(returns, tau);
  return static_cast<std::size_t>(
      std::count_if(returns.begin(), returns.end(), [&](double r) { return r <= cutoff; }));
}

VarianceCheck tail_variance_check(std::span<const double> returns, double tau) {
  if (returns.size() < 2) throw data_error(kModule, "variance check needs at least 2 observations");
  const double total = stats::sample_variance(returns);
  if (!(total > 0.0)) throw numerical_error(kModule, "degenerate sample: zero unconditional variance");
  const double cutoff = stats::empirical_quantile(returns, tau);
  std::vector<double> tail;
  for (double r : returns) {
    if (r <= cutoff) tail.push_back(r);
  }
  if (tail.size() < 2) throw data_error(kModule, "tail holds fewer than 2 observations");
  const double ratio = stats::sample_variance(tail) / total;
  return {ratio >= kVarianceRatioThreshold, ratio};
}

TailQuantileTriplet build_triplet(const std::map<std::string, std::vector<double>>& per_country_returns,
                                  std::optional<double> override_tau_low, std::size_t min_count) {
  if (per_country_returns.empty()) throw invalid_argument(kModule, "no countries");
  TailQuantileTriplet t;
  for (const auto& [country, r] : per_country_returns) {
    if (r.size() < min_count) {
      throw data_error(kModule, country + ": " + std::to_string(r.size()) + " observations, need at least " +
                                    std::to_string(min_count));
    }
    t.per_country_taus[country] = min_feasible_tail_quantile(r, min_count);
  }
  t.tau_low = unify_tail_quantile(t.per_country_taus);

  if (override_tau_low) {
    const double tau = *override_tau_low;
    if (!(tau > 0.0 && tau < 0.5)) {
      throw invalid_argument(kModule, "override tau " + std::to_string(tau) + " is not a left-tail quantile");
    }
    for (const auto& [country, r] : per_country_returns) {
      if (tail_count(r, tau) < min_count) {
        throw data_error(kModule, country + ": tau " + std::to_string(tau) + " leaves fewer than " +
                                      std::to_string(min_count) + " tail observations");
      }
    }
    t.tau_low = tau;
  }
  t.tau_mid = 0.5;
  t.tau_high = 1.0 - t.tau_low;

  for (const auto& [country, r] : per_country_returns) {
    try {
      const auto check = tail_variance_check(r, t.tau_low);
      t.variance_ratio[country] = check.ratio;
      if (!check.passes) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "tailsel: %s tail variance ratio %.4f below %.1f at tau %.4f",
                      country.c_str(), check.ratio, kVarianceRatioThreshold, t.tau_low);
        t.warnings.emplace_back(buf);
      }
    } catch (const Error& e) {
      t.warnings.push_back(std::string("tailsel: ") + country + " variance check undefined (" + e.what() + ")");
    }
  }
  return t;
}

}  // namespace hedgefx::tailsel
