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

#include <cstddef>
#include <span>
#include <vector>

namespace hedgefx::stats {

double mean(std::span<const double> x);

// Unbiased (n-1) sample variance, two-pass. Requires x.size() >= 2.
double sample_variance(std::span<const double> x);

// Rank k = ceil(tau * n) used for the type-1 empirical quantile, clamped to
// [1, n]. A small absolute slack absorbs products such as 0.08 * 75 that
// land a hair above an integer in floating point.
std::size_t order_statistic_rank(double tau, std::size_t n);

// Type-1 empirical quantile: the k-th order statistic with k = ceil(tau*n).
double empirical_quantile(std::span<const double> x, double tau);

// Linear-interpolation quantile (Hyndman-Fan type 7) over a sample; used for
// bootstrap percentile intervals.
double interpolated_quantile(std::vector<double> x, double p);

// Kendall's tau-b with tie correction, O(n log n). Returns 0 when either margin
// is constant.
double kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace hedgefx::stats
