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

#include "hedgefx/attribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hedgefx/error.hpp"
#include "hedgefx/random.hpp"
#include "hedgefx/resample.hpp"
#include "hedgefx/stats.hpp"

namespace hedgefx::attribution {
namespace {

constexpr const char* kModule = "attribution";

void check_inputs(const qreg::QuantileModel& model, std::span<const double> means, std::span<const double> x) {
  if (model.coefficients.size() != model.num_parents + model.interactions.size()) {
    throw invalid_argument(kModule, "schema mismatch: coefficient count does not match the model columns");
  }
  if (means.size() != model.num_parents) {
    throw invalid_argument(kModule, "missing background mean: expected " + std::to_string(model.num_parents) +
                                        ", got " + std::to_string(means.size()));
  }
  if (x.size() != model.num_parents) {
    throw invalid_argument(kModule, "schema mismatch: instance has " + std::to_string(x.size()) +
                                        " values, model has " + std::to_string(model.num_parents) + " features");
  }
}

// v(S): instance values on the coalition bitmask, means elsewhere.
double coalition_value(const qreg::QuantileModel& model, std::span<const double> means,
                       std::span<const double> x, std::uint64_t mask, std::vector<double>& scratch) {
  for (std::size_t j = 0; j < scratch.size(); ++j) scratch[j] = (mask >> j) & 1U ? x[j] : means[j];
  return model.predict_parents(scratch);
}

std::vector<double> coalition_table(const qreg::QuantileModel& model, std::span<const double> means,
                                    std::span<const double> x) {
  const std::size_t m = model.num_parents;
  std::vector<double> scratch(m);
  std::vector<double> v(std::size_t{1} << m);
  for (std::uint64_t s = 0; s < v.size(); ++s) v[s] = coalition_value(model, means, x, s, scratch);
  return v;
}

std::vector<double> factorials(std::size_t m) {
  std::vector<double> f(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) f[k] = f[k - 1] * static_cast<double>(k);
  return f;
}

std::vector<std::string> parent_columns(const qreg::QuantileModel& model) {
  return {model.columns.begin(), model.columns.begin() + static_cast<std::ptrdiff_t>(model.num_parents)};
}

}  // namespace

AttributionResult shapley_values(const qreg::QuantileModel& model, std::span<const double> background_means,
                                 std::span<const double> instance) {
  check_inputs(model, background_means, instance);
  const std::size_t m = model.num_parents;
  AttributionResult out;
  out.columns = parent_columns(model);
  out.phi.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) out.phi[j] = model.coefficients[j] * (instance[j] - background_means[j]);
  for (std::size_t k = 0; k < model.interactions.size(); ++k) {
    const auto [a, b] = model.interactions[k];
    const double g = model.coefficients[m + k];
    out.phi[a] += g * (instance[a] - background_means[a]) * (instance[b] + background_means[b]) / 2.0;
    out.phi[b] += g * (instance[b] - background_means[b]) * (instance[a] + background_means[a]) / 2.0;
  }
  out.phi0 = model.predict_parents(background_means);
  out.prediction = model.predict_parents(instance);
  return out;
}

AttributionResult shapley_brute_force(const qreg::QuantileModel& model, std::span<const double> background_means,
                                      std::span<const double> instance) {
  check_inputs(model, background_means, instance);
  const std::size_t m = model.num_parents;
  if (m > kMaxBruteForceFeatures) {
    throw invalid_argument(kModule, "brute-force Shapley limited to " + std::to_string(kMaxBruteForceFeatures) +
                                        " features, got " + std::to_string(m));
  }
  const auto v = coalition_table(model, background_means, instance);
  const auto fact = factorials(m);
  AttributionResult out;
  out.columns = parent_columns(model);
  out.phi.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::uint64_t s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      const double w = fact[size] * fact[m - size - 1] / fact[m];
      out.phi[j] += w * (v[s | bit] - v[s]);
    }
  }
  out.phi0 = v.front();
  out.prediction = v.back();
  return out;
}

Eigen::MatrixXd interaction_values(const qreg::QuantileModel& model, std::span<const double> background_means,
                                   std::span<const double> instance) {
  check_inputs(model, background_means, instance);
  const std::size_t m = model.num_parents;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < model.interactions.size(); ++k) {
    const auto [a, b] = model.interactions[k];
    const double value = model.coefficients[m + k] * (instance[a] - background_means[a]) *
                         (instance[b] - background_means[b]);
    phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += value;
    phi(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) += value;
  }
  return phi;
}

Eigen::MatrixXd interaction_brute_force(const qreg::QuantileModel& model, std::span<const double> background_means,
                                        std::span<const double> instance) {
  check_inputs(model, background_means, instance);
  const std::size_t m = model.num_parents;
  if (m > kMaxBruteForceInteractionFeatures) {
    throw invalid_argument(kModule, "brute-force interaction index limited to " +
                                        std::to_string(kMaxBruteForceInteractionFeatures) + " features, got " +
                                        std::to_string(m));
  }
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  if (m < 2) return phi;
  const auto v = coalition_table(model, background_means, instance);
  const auto fact = factorials(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      const std::uint64_t bj = std::uint64_t{1} << j;
      double total = 0.0;
      for (std::uint64_t s = 0; s < v.size(); ++s) {
        if (s & (bi | bj)) continue;
        const auto size = static_cast<std::size_t>(std::popcount(s));
        const double w = fact[size] * fact[m - size - 2] / fact[m - 1];
        total += w * (v[s | bi | bj] - v[s | bi] - v[s | bj] + v[s]);
      }
      phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = total;
      phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = total;
    }
  }
  return phi;
}

std::vector<double> background_means(const qreg::DesignMatrix& x, std::size_t rows) {
  if (rows == 0 || rows > x.rows()) throw invalid_argument(kModule, "background rows out of range");
  std::vector<double> means(x.num_parents);
  for (std::size_t c = 0; c < x.num_parents; ++c) {
    means[c] = x.values.col(static_cast<Eigen::Index>(c)).head(static_cast<Eigen::Index>(rows)).mean();
  }
  return means;
}

std::vector<AttributionResult> attribute_rows(const qreg::QuantileModel& model, const qreg::DesignMatrix& x,
                                              std::span<const double> means) {
  std::vector<AttributionResult> out;
  out.reserve(x.rows());
  std::vector<double> row(x.num_parents);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.num_parents; ++c) {
      row[c] = x.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    AttributionResult a = shapley_values(model, means, row);
    a.phi_interactions = interaction_values(model, means, row);
    a.instance_month = x.months[r];
    out.push_back(std::move(a));
  }
  return out;
}

ImportanceSummary importance_summary(std::span<const AttributionResult> results) {
  if (results.empty()) throw invalid_argument(kModule, "importance summary needs at least one attribution");
  ImportanceSummary out;
  out.columns = results.front().columns;
  const std::size_t m = out.columns.size();
  out.mean_abs_phi.assign(m, 0.0);
  for (const auto& r : results) {
    if (r.columns != out.columns) throw invalid_argument(kModule, "attributions have differing columns");
    for (std::size_t j = 0; j < m; ++j) out.mean_abs_phi[j] += std::abs(r.phi[j]);
  }
  double total = 0.0;
  for (auto& v : out.mean_abs_phi) {
    v /= static_cast<double>(results.size());
    total += v;
  }
  if (!(total > 0.0)) throw numerical_error(kModule, "importance shares undefined: all attributions are zero");
  out.shares_pct.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.shares_pct[j] = 100.0 * out.mean_abs_phi[j] / total;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.mean_abs_phi[a] != out.mean_abs_phi[b]) return out.mean_abs_phi[a] > out.mean_abs_phi[b];
    return out.columns[a] < out.columns[b];
  });
  for (auto j : order) out.ranking.push_back(out.columns[j]);
  return out;
}

double stability_kendall(std::span<const std::vector<std::string>> rankings) {
  if (rankings.size() < 2) throw invalid_argument(kModule, "stability needs at least 2 rankings");
  std::vector<std::string> reference = rankings.front();
  std::sort(reference.begin(), reference.end());
  // Position of each column (in sorted-name order) within every ranking.
  std::vector<std::vector<double>> positions;
  for (const auto& r : rankings) {
    std::vector<std::string> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != reference) throw invalid_argument(kModule, "rankings cover mismatched column sets");
    std::vector<double> pos(reference.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      const auto idx = std::lower_bound(reference.begin(), reference.end(), r[k]) - reference.begin();
      pos[static_cast<std::size_t>(idx)] = static_cast<double>(k);
    }
    positions.push_back(std::move(pos));
  }
  if (reference.size() < 2) return 1.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      sum += stats::kendall_tau(positions[a], positions[b]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

StabilityReport bootstrap_stability(const qreg::DesignMatrix& x, double tau, const StabilityOptions& options) {
  const std::size_t n = x.rows();
  StabilityReport report;
  report.block_length = options.block_length == 0 ? default_block_length(n) : options.block_length;
  if (options.replications < 2) throw invalid_argument(kModule, "stability needs at least 2 replications");

  std::vector<std::optional<std::vector<std::string>>> slots(options.replications);
  parallel_for(options.replications, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    const auto idx = moving_block_indices(n, report.block_length, rng);
    qreg::DesignMatrix rep = x;
    for (std::size_t i = 0; i < n; ++i) {
      rep.months[i] = x.months[idx[i]];
      rep.target[i] = x.target[idx[i]];
      rep.raw.row(static_cast<Eigen::Index>(i)) = x.raw.row(static_cast<Eigen::Index>(idx[i]));
    }
    try {
      rep = qreg::restandardize(rep, n);
      const auto model = qreg::fit_quantile(rep, tau);
      const auto means = background_means(rep, n);
      const auto attributions = attribute_rows(model, rep, means);
      slots[r] = importance_summary(attributions).ranking;
    } catch (const Error&) {
      // Counted below; a degenerate resample says nothing about stability.
    }
  });
  for (auto& s : slots) {
    if (s) {
      report.rankings.push_back(std::move(*s));
    } else {
      ++report.failed_replicates;
    }
  }
  if (report.rankings.size() < 2) {
    throw numerical_error(kModule, "fewer than 2 bootstrap replicates produced a ranking");
  }
  report.kendall_tau = stability_kendall(report.rankings);
  return report;
}

}  // namespace hedgefx::attribution
