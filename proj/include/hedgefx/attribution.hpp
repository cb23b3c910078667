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

// Exact Shapley attribution for quantile models with pairwise interactions.
//
// The value function is interventional: features in a coalition take their
// instance values, the rest take background means, and an interaction
// column is the product of its two parents' chosen values. For this model
// class the Shapley values and the Shapley interaction index have closed
// forms; subset enumeration is provided as a reference.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hedgefx/month.hpp"
#include "hedgefx/qreg.hpp"

namespace hedgefx::attribution {

inline constexpr std::size_t kMaxBruteForceFeatures = 12;
inline constexpr std::size_t kMaxBruteForceInteractionFeatures = 10;

// Players are the model's parent columns.
struct AttributionResult {
  std::vector<std::string> columns;
  std::vector<double> phi;
  double phi0 = 0.0;        // v(empty set), the prediction at the background
  double prediction = 0.0;  // model prediction at the instance
  Eigen::MatrixXd phi_interactions;  // symmetric, zero diagonal
  std::optional<MonthStamp> instance_month;
};

// Closed form:
//   phi_j = beta_j (x_j - mu_j) + sum_k gamma_jk (x_j - mu_j)(x_k + mu_k) / 2.
// Interaction values are left empty; see interaction_values().
AttributionResult shapley_values(const qreg::QuantileModel& model, std::span<const double> background_means,
                                 std::span<const double> instance);

// Reference implementation by enumerating all 2^M coalitions (M <= 12).
AttributionResult shapley_brute_force(const qreg::QuantileModel& model, std::span<const double> background_means,
                                      std::span<const double> instance);

// Shapley interaction index; closed form
// phi_ij = gamma_ij (x_i - mu_i)(x_j - mu_j) for declared pairs, else 0.
Eigen::MatrixXd interaction_values(const qreg::QuantileModel& model, std::span<const double> background_means,
                                   std::span<const double> instance);

// Reference interaction index by coalition enumeration (M <= 10).
Eigen::MatrixXd interaction_brute_force(const qreg::QuantileModel& model, std::span<const double> background_means,
                                        std::span<const double> instance);

// Means of the standardized parent columns over rows [0, rows).
std::vector<double> background_means(const qreg::DesignMatrix& x, std::size_t rows);

// Full attribution (values and interactions) for every row of `x`.
std::vector<AttributionResult> attribute_rows(const qreg::QuantileModel& model, const qreg::DesignMatrix& x,
                                              std::span<const double> means);

struct ImportanceSummary {
  std::vector<std::string> ranking;   // by descending share, ties by name
  std::vector<std::string> columns;   // model order
  std::vector<double> mean_abs_phi;   // model order
  std::vector<double> shares_pct;     // model order, sums to 100
  std::optional<double> stability_kendall_tau;
};

// Throws a numerical error when every attribution is zero.
ImportanceSummary importance_summary(std::span<const AttributionResult> results);

// Mean pairwise Kendall rank correlation. Every ranking must order the same
// set of columns.
double stability_kendall(std::span<const std::vector<std::string>> rankings);

struct StabilityOptions {
  std::size_t replications = 1000;
  std::size_t block_length = 0;  // 0 selects ceil(T^(1/3))
  std::uint64_t seed = 0;
};

struct StabilityReport {
  std::vector<std::vector<std::string>> rankings;
  double kendall_tau = 0.0;
  std::size_t failed_replicates = 0;
  std::size_t block_length = 0;
};

// Moving-block bootstrap over the rows of `x`: each replicate resamples
// rows, re-standardizes, refits at `tau` and ranks importance over its rows.
// Replicates whose refit or ranking fails are counted and skipped.
StabilityReport bootstrap_stability(const qreg::DesignMatrix& x, double tau, const StabilityOptions& options);

}  // namespace hedgefx::attribution
