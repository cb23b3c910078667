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

#include "hedgefx/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hedgefx/error.hpp"
#include "hedgefx/resample.hpp"
#include "hedgefx/stats.hpp"

namespace hedgefx::copula {
namespace {

constexpr const char* kModule = "copula";
constexpr double kBoundarySlack = 1e-5;
constexpr double kFrankZero = 1e-6;

// (1/theta) * integral_0^theta t / (e^t - 1) dt, by composite Simpson.
double debye1(double theta) {
  if (std::abs(theta) < 1e-10) return 1.0;
  constexpr int kIntervals = 512;
  const double h = theta / kIntervals;
  const auto f = [](double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); };
  double sum = f(0.0) + f(theta);
  for (int i = 1; i < kIntervals; ++i) sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0 / theta;
}

double gumbel_conditional(double theta, double u, double v) {
  // dC/du for the Gumbel copula.
  const double x = -std::log(u);
  const double y = -std::log(v);
  const double a = std::pow(x, theta) + std::pow(y, theta);
  const double c = std::exp(-std::pow(a, 1.0 / theta));
  return c / u * std::pow(x, theta - 1.0) * std::pow(a, 1.0 / theta - 1.0);
}

// Steps outward from x0 with doubling steps until the objective stops
// increasing (or a bound is hit); returns an interval containing a local
// maximum.
template <typename F>
std::pair<double, double> bracket_maximum(F&& objective, double x0, ParameterBounds bounds) {
  double step = 0.1 * std::max(1.0, std::abs(x0));
  const double f0 = objective(x0);
  const double xr = std::min(bounds.hi, x0 + step);
  const double fr = objective(xr);
  double dir = 1.0;
  double next = xr, fnext = fr;
  if (!(fr > f0)) {
    const double xl = std::max(bounds.lo, x0 - step);
    const double fl = objective(xl);
    if (!(fl > f0)) return {xl, xr};
    dir = -1.0;
    next = xl;
    fnext = fl;
  }
  double behind = x0;
  double best = next, fbest = fnext;
  for (;;) {
    step *= 2.0;
    const double cand = std::clamp(best + dir * step, bounds.lo, bounds.hi);
    if (cand == best) return {std::min(behind, best), std::max(behind, best)};
    const double fc = objective(cand);
    if (!(fc > fbest)) return {std::min(behind, cand), std::max(behind, cand)};
    behind = best;
    best = cand;
    fbest = fc;
  }
}

bool near_bound(Family f, double theta) {
  const auto b = parameter_bounds(f);
  if (theta - b.lo < kBoundarySlack || b.hi - theta < kBoundarySlack) return true;
  return f == Family::kFrank && std::abs(theta) < kBoundarySlack;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kClayton: return "clayton";
    case Family::kGumbel: return "gumbel";
    case Family::kFrank: return "frank";
  }
  return "unknown";
}

std::optional<Family> parse_family(const std::string& text) {
  if (text == "clayton") return Family::kClayton;
  if (text == "gumbel") return Family::kGumbel;
  if (text == "frank") return Family::kFrank;
  return std::nullopt;
}

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::kConverged: return "converged";
    case FitStatus::kBoundary: return "boundary";
    case FitStatus::kNotConverged: return "not_converged";
  }
  return "unknown";
}

std::vector<double> pseudo_observations(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw invalid_argument(kModule, "pseudo_observations needs at least 2 values");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> out(n);
  const double denom = static_cast<double>(n) + 1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // Ranks i+1 .. j+1 share their average.
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank / denom;
    i = j + 1;
  }
  return out;
}

PseudoSample make_pseudo_sample(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw invalid_argument(kModule, "paired series differ in length");
  return {pseudo_observations(x), pseudo_observations(y)};
}

ParameterBounds parameter_bounds(Family f) {
  switch (f) {
    case Family::kClayton: return {1e-6, 50.0};
    case Family::kGumbel: return {1.0 + 1e-6, 50.0};
    case Family::kFrank: return {-50.0, 50.0};
  }
  return {0.0, 0.0};
}

double log_density(Family f, double theta, double u, double v) {
  switch (f) {
    case Family::kClayton: {
      const double lu = std::log(u);
      const double lv = std::log(v);
      const double a = std::expm1(-theta * lu) + std::expm1(-theta * lv);
      return std::log1p(theta) - (theta + 1.0) * (lu + lv) - (2.0 + 1.0 / theta) * std::log1p(a);
    }
    case Family::kGumbel: {
      const double x = -std::log(u);
      const double y = -std::log(v);
      const double lx = std::log(x);
      const double ly = std::log(y);
      const double hi = std::max(theta * lx, theta * ly);
      const double la = hi + std::log(std::exp(theta * lx - hi) + std::exp(theta * ly - hi));
      const double a_root = std::exp(la / theta);
      return -a_root + (theta - 1.0) * (lx + ly) + x + y + (2.0 / theta - 2.0) * la +
             std::log1p((theta - 1.0) / a_root);
    }
    case Family::kFrank: {
      if (std::abs(theta) < 1e-12) return 0.0;
      // c(u, v; -theta) = c(u, 1 - v; theta).
      if (theta < 0.0) {
        theta = -theta;
        v = 1.0 - v;
      }
      // (1 - e^-t) - (1 - e^-tu)(1 - e^-tv) rewritten as a sum of positive
      // terms; the direct form cancels to zero for large theta.
      const double d = -std::exp(-theta * u) * std::expm1(-theta * v) -
                       std::exp(-theta * v) * std::expm1(-theta * (1.0 - v));
      return std::log(theta * -std::expm1(-theta)) - theta * (u + v) - 2.0 * std::log(d);
    }
  }
  return 0.0;
}

double log_likelihood(Family f, double theta, const PseudoSample& s) {
  double ll = 0.0;
  for (std::size_t i = 0; i < s.n(); ++i) ll += log_density(f, theta, s.u[i], s.v[i]);
  return ll;
}

double kendall_from_theta(Family f, double theta) {
  switch (f) {
    case Family::kClayton: return theta / (theta + 2.0);
    case Family::kGumbel: return 1.0 - 1.0 / theta;
    case Family::kFrank:
      if (std::abs(theta) < 1e-8) return 0.0;
      return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
  }
  return 0.0;
}

double theta_from_kendall(Family f, double tau) {
  const auto b = parameter_bounds(f);
  switch (f) {
    case Family::kClayton:
      if (tau <= 0.0) return b.lo;
      return std::clamp(2.0 * tau / (1.0 - tau), b.lo, b.hi);
    case Family::kGumbel:
      if (tau <= 0.0) return b.lo;
      return std::clamp(1.0 / (1.0 - tau), b.lo, b.hi);
    case Family::kFrank: {
      const double t_lo = kendall_from_theta(f, b.lo);
      const double t_hi = kendall_from_theta(f, b.hi);
      if (tau <= t_lo) return b.lo;
      if (tau >= t_hi) return b.hi;
      double lo = b.lo, hi = b.hi;
      for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        (kendall_from_theta(f, mid) < tau ? lo : hi) = mid;
      }
      const double theta = 0.5 * (lo + hi);
      if (std::abs(theta) < kFrankZero) return tau >= 0.0 ? kFrankZero : -kFrankZero;
      return theta;
    }
  }
  return b.lo;
}

CopulaFit fit_copula(const PseudoSample& sample, Family family, const FitOptions& options) {
  if (sample.u.size() != sample.v.size()) throw invalid_argument(kModule, "u and v differ in length");
  if (sample.n() < kMinFitSample) {
    throw data_error(kModule, "fit needs at least " + std::to_string(kMinFitSample) + " pairs, got " +
                                  std::to_string(sample.n()));
  }
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (!(sample.u[i] > 0.0 && sample.u[i] < 1.0 && sample.v[i] > 0.0 && sample.v[i] < 1.0)) {
      throw invalid_argument(kModule, "pseudo-observations must lie strictly inside (0,1)");
    }
  }

  const auto bounds = parameter_bounds(family);
  int evaluations = 0;
  const auto objective = [&](double theta) {
    ++evaluations;
    const double ll = log_likelihood(family, theta, sample);
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
  };

  const double tau = stats::kendall_tau(sample.u, sample.v);
  double x0 = std::clamp(theta_from_kendall(family, tau), bounds.lo, bounds.hi);

  auto [a, b] = bracket_maximum(objective, x0, bounds);

  // Golden-section search on [a, b].
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  int it = 0;
  while (b - a > options.tolerance && it < options.max_iterations) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
    }
    ++it;
  }

  CopulaFit fit;
  fit.family = family;
  fit.n = sample.n();
  fit.iterations = it;
  fit.theta = 0.5 * (a + b);
  if (family == Family::kFrank && std::abs(fit.theta) < kFrankZero) {
    fit.theta = fit.theta >= 0.0 ? kFrankZero : -kFrankZero;
  }
  fit.log_likelihood = log_likelihood(family, fit.theta, sample);
  fit.aic = 2.0 - 2.0 * fit.log_likelihood;
  fit.bic = std::log(static_cast<double>(fit.n)) - 2.0 * fit.log_likelihood;
  fit.lambda_lower = lower_tail_dependence(family, fit.theta);

  if (b - a > options.tolerance) {
    fit.status = FitStatus::kNotConverged;
    fit.diagnostic = std::string(to_string(family)) + ": no convergence after " + std::to_string(it) + " iterations";
  } else if (!std::isfinite(fit.log_likelihood)) {
    fit.status = FitStatus::kNotConverged;
    fit.diagnostic = std::string(to_string(family)) + ": non-finite log-likelihood";
  } else if (near_bound(family, fit.theta)) {
    fit.status = FitStatus::kBoundary;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: theta %.6g at parameter-space boundary", to_string(family), fit.theta);
    fit.diagnostic = buf;
  }
  return fit;
}

CopulaFit select_family(std::span<const CopulaFit> fits, Criterion criterion) {
  const auto value = [&](const CopulaFit& f) { return criterion == Criterion::kAic ? f.aic : f.bic; };
  const CopulaFit* best = nullptr;
  for (FitStatus wanted : {FitStatus::kConverged, FitStatus::kBoundary}) {
    for (const auto& f : fits) {
      if (f.status != wanted) continue;
      if (!best || value(f) < value(*best) ||
          (value(f) == value(*best) && static_cast<int>(f.family) < static_cast<int>(best->family))) {
        best = &f;
      }
    }
    if (best) return *best;
  }
  throw numerical_error(kModule, "no copula family converged");
}

double lower_tail_dependence(Family f, double theta) {
  const auto b = parameter_bounds(f);
  const bool in_range = f == Family::kFrank ? (theta >= b.lo && theta <= b.hi && theta != 0.0)
                                            : (theta >= b.lo && theta <= b.hi);
  if (!in_range) throw invalid_argument(kModule, std::string(to_string(f)) + ": theta outside valid range");
  return f == Family::kClayton ? std::exp2(-1.0 / theta) : 0.0;
}

double empirical_tail_dependence(const PseudoSample& s, double tau) {
  std::size_t cond = 0, joint = 0;
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (s.u[i] <= tau) {
      ++cond;
      if (s.v[i] <= tau) ++joint;
    }
  }
  if (cond == 0) throw data_error(kModule, "empty conditioning set for empirical tail dependence");
  return static_cast<double>(joint) / static_cast<double>(cond);
}

PseudoSample simulate(Family f, double theta, std::size_t n, Rng& rng) {
  PseudoSample s;
  s.u.resize(n);
  s.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double w = rng.uniform();
    double v = 0.0;
    switch (f) {
      case Family::kClayton:
        v = std::pow(std::pow(u, -theta) * (std::pow(w, -theta / (1.0 + theta)) - 1.0) + 1.0, -1.0 / theta);
        break;
      case Family::kFrank:
        v = -std::log1p(w * std::expm1(-theta) / (w + (1.0 - w) * std::exp(-theta * u))) / theta;
        break;
      case Family::kGumbel: {
        double lo = 0.0, hi = 1.0;
        for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
          const double mid = 0.5 * (lo + hi);
          (gumbel_conditional(theta, u, mid) < w ? lo : hi) = mid;
        }
        v = 0.5 * (lo + hi);
        break;
      }
    }
    s.u[i] = u;
    s.v[i] = std::clamp(v, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
  }
  return s;
}

BootstrapInterval block_bootstrap_ci(const PseudoSample& sample, const TailStatistic& statistic,
                                     const BootstrapOptions& options) {
  const std::size_t n = sample.n();
  if (n < 2) throw invalid_argument(kModule, "bootstrap needs at least 2 pairs");
  if (options.replications < 100) throw invalid_argument(kModule, "bootstrap needs at least 100 replications");
  if (!(options.level > 0.0 && options.level < 1.0)) throw invalid_argument(kModule, "level outside (0,1)");
  const std::size_t block = options.block_length == 0 ? default_block_length(n) : options.block_length;
  if (block > n) {
    throw invalid_argument(kModule, "block length " + std::to_string(block) + " exceeds sample size " +
                                        std::to_string(n));
  }

  BootstrapInterval out;
  out.block_length = block;
  out.replicates.resize(options.replications);
  parallel_for(options.replications, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    const auto idx = moving_block_indices(n, block, rng);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = sample.u[idx[i]];
      v[i] = sample.v[idx[i]];
    }
    PseudoSample re{pseudo_observations(u), pseudo_observations(v)};
    out.replicates[r] = statistic(re);
  });

  const double alpha = 1.0 - options.level;
  out.lo = stats::interpolated_quantile(out.replicates, alpha / 2.0);
  out.hi = stats::interpolated_quantile(out.replicates, 1.0 - alpha / 2.0);
  out.median = stats::interpolated_quantile(out.replicates, 0.5);
  return out;
}

TailStatistic fitted_lambda_statistic(Family family) {
  return [family](const PseudoSample& s) { return fit_copula(s, family).lambda_lower; };
}

}  // namespace hedgefx::copula
