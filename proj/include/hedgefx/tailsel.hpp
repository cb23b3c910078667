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

// Left-tail quantile selection by the minimum-cardinality rule.
//
// For each country the tail quantile is the smallest tau whose empirical
// lower tail holds at least `min_count` observations (min_count / T under
// the order-statistic quantile k = ceil(tau T)). The unified threshold is the
// maximum across countries, so every country's tail is populated. The
// median and the mirrored upper quantile complete the triplet.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hedgefx::tailsel {

inline constexpr std::size_t kDefaultMinTailCount = 6;
inline constexpr double kVarianceRatioThreshold = 2.0;

struct TailQuantileTriplet {
  double tau_low = 0.0;
  double tau_mid = 0.5;
  double tau_high = 1.0;
  std::map<std::string, double> per_country_taus;
  std::map<std::string, double> variance_ratio;
  std::vector<std::string> warnings;
};

double min_feasible_tail_quantile(std::span<const double> returns,
                                  std::size_t min_count = kDefaultMinTailCount);

double unify_tail_quantile(const std::map<std::string, double>& per_country);

// Number of observations at or below the type-1 empirical tau-quantile.
std::size_t tail_count(std::span<const double> returns, double tau);

struct VarianceCheck {
  bool passes = false;
  double ratio = 0.0;
};

// Var(R | R <= F^-1(tau)) / Var(R), both unbiased; passes when the ratio is
// at least 2.
VarianceCheck tail_variance_check(std::span<const double> returns, double tau);

// Builds the (tau_low, 0.5, 1 - tau_low) triplet. When `override_tau_low` is
// set it replaces the data-driven threshold (sensitivity runs); it must
// still leave min_count observations in every country's tail. Variance-check
// failures are recorded as warnings.
TailQuantileTriplet build_triplet(const std::map<std::string, std::vector<double>>& per_country_returns,
                                  std::optional<double> override_tau_low = std::nullopt,
                                  std::size_t min_count = kDefaultMinTailCount);

}  // namespace hedgefx::tailsel
