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

// One-parameter Archimedean copulas (Clayton, Gumbel, Frank) on
// rank-transformed pairs: maximum-likelihood fitting, information-criterion
// selection, lower tail dependence and moving-block bootstrap intervals.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hedgefx/random.hpp"

namespace hedgefx::copula {

enum class Family { kClayton, kGumbel, kFrank };

inline constexpr Family kAllFamilies[] = {Family::kClayton, Family::kGumbel, Family::kFrank};

const char* to_string(Family f);
std::optional<Family> parse_family(const std::string& text);

// Paired pseudo-observations strictly inside (0, 1). `u` comes from equity
// returns, `v` from purchasing-power erosion.
struct PseudoSample {
  std::vector<double> u;
  std::vector<double> v;

  std::size_t n() const { return u.size(); }
};

// rank / (n + 1) with average ranks for ties.
std::vector<double> pseudo_observations(std::span<const double> x);

PseudoSample make_pseudo_sample(std::span<const double> x, std::span<const double> y);

struct ParameterBounds {
  double lo;
  double hi;
};

// Clayton [1e-6, 50], Gumbel [1 + 1e-6, 50], Frank [-50, 50] (0 excluded).
ParameterBounds parameter_bounds(Family f);

double log_density(Family f, double theta, double u, double v);
double log_likelihood(Family f, double theta, const PseudoSample& s);

// Kendall's tau implied by theta, and its inverse (clamped to the family's
// bounds).
double kendall_from_theta(Family f, double theta);
double theta_from_kendall(Family f, double tau);

enum class FitStatus { kConverged, kBoundary, kNotConverged };
const char* to_string(FitStatus s);

struct CopulaFit {
  Family family = Family::kClayton;
  double theta = 0.0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double lambda_lower = 0.0;
  std::pair<double, double> lambda_lower_ci{0.0, 0.0};
  double empirical_lambda_at_tau = 0.0;
  FitStatus status = FitStatus::kConverged;
  std::string diagnostic;  // boundary / convergence notes
  std::size_t n = 0;
  int iterations = 0;
};

struct FitOptions {
  double tolerance = 1e-8;  // on |delta theta|
  int max_iterations = 500;
};

inline constexpr std::size_t kMinFitSample = 20;

// Maximizes the log-likelihood over theta: Kendall-tau inversion for the
// start, outward bracketing, then golden-section search. A maximizer within
// 1e-5 of a bound is reported as kBoundary, never silently clamped.
CopulaFit fit_copula(const PseudoSample& sample, Family family, const FitOptions& options = {});

enum class Criterion { kAic, kBic };

// Minimum criterion among usable fits. Converged fits take precedence over
// boundary fits; ties break by family order Clayton < Gumbel < Frank.
// Throws a numerical error when every fit failed to converge.
CopulaFit select_family(std::span<const CopulaFit> fits, Criterion criterion);

// Clayton 2^(-1/theta); Gumbel and Frank have no lower tail dependence.
double lower_tail_dependence(Family f, double theta);

// count{u <= tau and v <= tau} / count{u <= tau}.
double empirical_tail_dependence(const PseudoSample& s, double tau);

// Draws n pairs by conditional inversion (Gumbel inverts numerically).
PseudoSample simulate(Family f, double theta, std::size_t n, Rng& rng);

using TailStatistic = std::function<double(const PseudoSample&)>;

struct BootstrapOptions {
  std::size_t replications = 1000;
  double level = 0.95;
  std::size_t block_length = 0;  // 0 selects ceil(n^(1/3))
  std::uint64_t seed = 0;
};

struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;
  double median = 0.0;
  std::size_t block_length = 0;
  std::vector<double> replicates;
};

// Moving-block bootstrap of the paired sequence. Each replicate resamples
// whole blocks of (u, v) pairs, re-ranks both margins and evaluates the
// statistic; the interval is the percentile interval at `level`. Replicate r
// draws from a seed derived from (seed, r), so the result is independent of
// scheduling.
BootstrapInterval block_bootstrap_ci(const PseudoSample& sample, const TailStatistic& statistic,
                                     const BootstrapOptions& options);

// Statistic: refit `family` and return its analytic lower tail dependence.
TailStatistic fitted_lambda_statistic(Family family);

}  // namespace hedgefx::copula
