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

#include "hedgefx/qreg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hedgefx/error.hpp"
#include "hedgefx/stats.hpp"
#include "quantile_lp.hpp"

namespace hedgefx::qreg {
namespace {

constexpr const char* kModule = "qreg";
constexpr std::size_t kMinFitRows = 10;

bool is_reserved(const std::string& id) { return id.rfind(kReservedEquityPrefix, 0) == 0; }

struct ParentSpec {
  std::string series;
  int lag;
  bool continuous;
};

std::vector<ParentSpec> parent_specs(const FeatureSchema& schema) {
  std::vector<ParentSpec> out;
  for (const auto& f : schema.base_features) out.push_back({f, 0, true});
  for (const auto& [f, lags] : schema.lag_spec) {
    std::vector<int> sorted = lags;
    std::sort(sorted.begin(), sorted.end());
    for (int lag : sorted) out.push_back({f, lag, true});
  }
  for (const auto& [d, lags] : schema.event_dummies) {
    std::vector<int> sorted = lags;
    sorted.push_back(0);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int lag : sorted) out.push_back({d, lag, false});
  }
  return out;
}

void apply_standardization(DesignMatrix& x) {
  const auto rows = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.num_parents);
  x.values.resize(rows, p + static_cast<Eigen::Index>(x.interactions.size()));
  for (Eigen::Index c = 0; c < p; ++c) {
    const auto k = static_cast<std::size_t>(c);
    if (!x.continuous[k]) {
      x.values.col(c) = x.raw.col(c);
    } else if (x.scale[k] > 0.0) {
      x.values.col(c) = (x.raw.col(c).array() - x.center[k]) / x.scale[k];
    } else {
      x.values.col(c).setZero();
    }
  }
  for (std::size_t k = 0; k < x.interactions.size(); ++k) {
    const auto [i, j] = x.interactions[k];
    x.values.col(p + static_cast<Eigen::Index>(k)) =
        x.values.col(static_cast<Eigen::Index>(i)).cwiseProduct(x.values.col(static_cast<Eigen::Index>(j)));
  }
}

void fit_standardization(DesignMatrix& x, std::size_t train_rows) {
  x.center.assign(x.num_parents, 0.0);
  x.scale.assign(x.num_parents, 1.0);
  if (train_rows < 2) throw data_error(kModule, "standardization needs at least 2 training rows");
  for (std::size_t c = 0; c < x.num_parents; ++c) {
    if (!x.continuous[c]) continue;
    std::vector<double> col(train_rows);
    for (std::size_t r = 0; r < train_rows; ++r) col[r] = x.raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    const double m = stats::mean(col);
    const double sd = std::sqrt(stats::sample_variance(col));
    x.center[c] = m;
    x.scale[c] = sd > 1e-12 * std::max(1.0, std::abs(m)) ? sd : 0.0;
  }
}

}  // namespace

double check_loss(double u, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw invalid_argument(kModule, "tau outside (0,1)");
  return u * (tau - (u < 0.0 ? 1.0 : 0.0));
}

std::string FeatureSchema::column_name(const std::string& series, int lag) {
  return lag == 0 ? series : series + "_lag" + std::to_string(lag);
}

std::string FeatureSchema::interaction_name(const std::string& a, const std::string& b) { return a + ":" + b; }

void FeatureSchema::validate() const {
  const std::set<std::string> excluded_set(excluded.begin(), excluded.end());
  const auto guard = [&](const std::string& id) {
    if (is_reserved(id)) {
      throw config_error("endogeneity guard: '" + id + "' is equity-derived (reserved prefix '" +
                         std::string(kReservedEquityPrefix) + "') and cannot be a feature");
    }
    if (excluded_set.count(id)) throw config_error("endogeneity guard: '" + id + "' is excluded from features");
  };
  std::set<std::string> columns;
  for (const auto& p : parent_specs(*this)) {
    guard(p.series);
    if (p.lag < 0) throw config_error("negative lag for '" + p.series + "'");
    const std::string name = column_name(p.series, p.lag);
    guard(name);
    if (!columns.insert(name).second) throw config_error("duplicate feature column '" + name + "'");
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& [a, b] : interaction_pairs) {
    guard(a);
    guard(b);
    if (!columns.count(a) || !columns.count(b)) {
      throw config_error("interaction (" + a + ", " + b + ") names an unknown column");
    }
    if (a == b) throw config_error("interaction of '" + a + "' with itself");
    auto key = std::minmax(a, b);
    if (!pairs.insert({key.first, key.second}).second) {
      throw config_error("duplicate interaction (" + a + ", " + b + ")");
    }
  }
}

DesignMatrix engineer_features(const std::map<std::string, dataio::MacroSeries>& panel,
                               const FeatureSchema& schema, const dataio::MacroSeries& target,
                               std::optional<dataio::MonthRange> window) {
  schema.validate();
  const auto specs = parent_specs(schema);
  std::vector<const dataio::MacroSeries*> sources;
  for (const auto& s : specs) {
    auto it = panel.find(s.series);
    if (it == panel.end()) throw config_error("feature schema references absent series '" + s.series + "'");
    if (!s.continuous) {
      for (const auto& o : it->second.observations) {
        if (o.value != 0.0 && o.value != 1.0) {
          throw data_error(kModule, "event dummy '" + s.series + "' has non-binary value at " + o.month.to_string());
        }
      }
    }
    sources.push_back(&it->second);
  }

  DesignMatrix x;
  x.num_parents = specs.size();
  for (const auto& s : specs) {
    x.columns.push_back(FeatureSchema::column_name(s.series, s.lag));
    x.continuous.push_back(s.continuous);
  }
  for (const auto& [a, b] : schema.interaction_pairs) {
    const auto ia = static_cast<std::size_t>(std::find(x.columns.begin(), x.columns.end(), a) - x.columns.begin());
    const auto ib = static_cast<std::size_t>(std::find(x.columns.begin(), x.columns.end(), b) - x.columns.begin());
    x.interactions.emplace_back(ia, ib);
  }
  for (const auto& [a, b] : schema.interaction_pairs) x.columns.push_back(FeatureSchema::interaction_name(a, b));

  std::vector<std::vector<double>> rows;
  for (const auto& obs : target.observations) {
    if (window && (obs.month < window->first || obs.month > window->last)) continue;
    std::vector<double> row(specs.size());
    bool complete = true;
    for (std::size_t c = 0; c < specs.size() && complete; ++c) {
      const auto v = sources[c]->at(obs.month - specs[c].lag);
      if (v) {
        row[c] = *v;
      } else {
        complete = false;
      }
    }
    if (!complete) {
      ++x.dropped_rows;
      continue;
    }
    x.months.push_back(obs.month);
    x.target.push_back(obs.value);
    rows.push_back(std::move(row));
  }
  if (x.dropped_rows > 0) {
    x.warnings.push_back("qreg: dropped " + std::to_string(x.dropped_rows) + " row(s) with missing features");
  }
  if (rows.size() < 2) throw data_error(kModule, "fewer than 2 complete feature rows");

  x.raw.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(specs.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < specs.size(); ++c) {
      x.raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  fit_standardization(x, x.rows());
  apply_standardization(x);
  return x;
}

DesignMatrix restandardize(const DesignMatrix& x, std::size_t train_rows) {
  if (train_rows > x.rows()) throw invalid_argument(kModule, "training rows exceed design rows");
  DesignMatrix out = x;
  fit_standardization(out, train_rows);
  apply_standardization(out);
  return out;
}

DesignMatrix design_from_matrix(std::vector<std::string> parent_columns, const Eigen::MatrixXd& raw,
                                std::vector<double> target,
                                std::vector<std::pair<std::size_t, std::size_t>> interactions, bool standardize) {
  const auto p = parent_columns.size();
  if (static_cast<std::size_t>(raw.cols()) != p) throw invalid_argument(kModule, "column names do not match matrix");
  if (static_cast<std::size_t>(raw.rows()) != target.size()) throw invalid_argument(kModule, "target length mismatch");
  if (target.size() < 2) throw data_error(kModule, "fewer than 2 rows");
  DesignMatrix x;
  x.num_parents = p;
  x.columns = std::move(parent_columns);
  for (const auto& [a, b] : interactions) {
    if (a >= p || b >= p || a == b) throw invalid_argument(kModule, "interaction index out of range");
    x.columns.push_back(FeatureSchema::interaction_name(x.columns[a], x.columns[b]));
  }
  x.interactions = std::move(interactions);
  x.target = std::move(target);
  const MonthStamp start = MonthStamp::from_serial(2000 * 12);
  for (std::size_t r = 0; r < x.target.size(); ++r) x.months.push_back(start + static_cast<int>(r));
  x.raw = raw;
  x.continuous.assign(p, standardize);
  fit_standardization(x, x.rows());
  apply_standardization(x);
  return x;
}

std::vector<double> interact(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw invalid_argument(kModule, "interaction parents differ in length");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

std::map<std::string, double> QuantileModel::betas() const {
  std::map<std::string, double> out;
  for (std::size_t c = 0; c < num_parents; ++c) out[columns[c]] = coefficients[c];
  return out;
}

std::map<std::pair<std::string, std::string>, double> QuantileModel::gammas() const {
  std::map<std::pair<std::string, std::string>, double> out;
  for (std::size_t k = 0; k < interactions.size(); ++k) {
    out[{columns[interactions[k].first], columns[interactions[k].second]}] = coefficients[num_parents + k];
  }
  return out;
}

double QuantileModel::predict_row(std::span<const double> row) const {
  if (row.size() != coefficients.size()) throw invalid_argument(kModule, "row width does not match model");
  double y = intercept;
  for (std::size_t c = 0; c < row.size(); ++c) y += coefficients[c] * row[c];
  return y;
}

double QuantileModel::predict_parents(std::span<const double> parents) const {
  if (parents.size() != num_parents) throw invalid_argument(kModule, "parent count does not match model");
  double y = intercept;
  for (std::size_t c = 0; c < num_parents; ++c) y += coefficients[c] * parents[c];
  for (std::size_t k = 0; k < interactions.size(); ++k) {
    y += coefficients[num_parents + k] * parents[interactions[k].first] * parents[interactions[k].second];
  }
  return y;
}

double intercept_only(std::span<const double> y, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw invalid_argument(kModule, "tau outside (0,1)");
  return stats::empirical_quantile(y, tau);
}

QuantileModel fit_quantile(const DesignMatrix& x, double tau, std::optional<std::size_t> rows) {
  if (!(tau > 0.0 && tau < 1.0)) throw invalid_argument(kModule, "tau outside (0,1)");
  const std::size_t t = rows.value_or(x.rows());
  if (t > x.rows()) throw invalid_argument(kModule, "fit rows exceed design rows");
  if (t < kMinFitRows) {
    throw data_error(kModule, "fit needs at least " + std::to_string(kMinFitRows) + " rows, got " + std::to_string(t));
  }
  const auto T = static_cast<Eigen::Index>(t);
  Eigen::VectorXd y(T);
  for (Eigen::Index i = 0; i < T; ++i) y(i) = x.target[static_cast<std::size_t>(i)];
  if (y.maxCoeff() == y.minCoeff()) throw numerical_error(kModule, "degenerate all-constant target");

  QuantileModel model;
  model.tau = tau;
  model.columns = x.columns;
  model.num_parents = x.num_parents;
  model.interactions = x.interactions;
  model.coefficients.assign(x.cols(), 0.0);
  model.fit_rows = t;

  // Column screening: zero training variance, then linear dependence on the
  // intercept and earlier kept columns.
  std::vector<std::size_t> kept;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Ones(T, 1);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const auto col = x.values.col(static_cast<Eigen::Index>(c)).head(T);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(t - 1);
    if (!(var > 1e-12)) {
      model.dropped.push_back(x.columns[c]);
      model.warnings.push_back("qreg: dropped degenerate column '" + x.columns[c] + "' (zero training variance)");
      continue;
    }
    Eigen::MatrixXd trial(T, basis.cols() + 1);
    trial << basis, col;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial);
    qr.setThreshold(1e-10);
    if (qr.rank() < trial.cols()) {
      model.dropped.push_back(x.columns[c]);
      model.warnings.push_back("qreg: dropped collinear column '" + x.columns[c] + "'");
      continue;
    }
    basis = std::move(trial);
    kept.push_back(c);
  }

  const int budget = 50 * static_cast<int>(t + basis.cols()) + 1000;
  const auto lp = detail::solve_quantile_lp(basis, y, tau, budget);
  if (!lp.converged) {
    throw numerical_error(kModule, "quantile LP did not converge within " + std::to_string(budget) + " iterations");
  }
  model.iterations = lp.iterations;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    model.coefficients[kept[k]] = lp.beta(static_cast<Eigen::Index>(k + 1));
  }

  // Canonical intercept: lower endpoint of the optimal set for these slopes.
  std::vector<double> residual(t);
  for (std::size_t i = 0; i < t; ++i) {
    double fitted = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      fitted += model.coefficients[kept[k]] *
                x.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(kept[k]));
    }
    residual[i] = x.target[i] - fitted;
  }
  model.intercept = stats::empirical_quantile(residual, tau);
  model.objective = total_check_loss(model, x, 0, t);
  return model;
}

double total_check_loss(const QuantileModel& model, const DesignMatrix& x, std::size_t begin, std::size_t end) {
  if (end > x.rows() || begin > end) throw invalid_argument(kModule, "row range out of bounds");
  if (model.coefficients.size() != x.cols()) throw invalid_argument(kModule, "schema mismatch between model and design");
  double loss = 0.0;
  std::vector<double> row(x.cols());
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t c = 0; c < x.cols(); ++c) row[c] = x.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    loss += check_loss(x.target[i] - model.predict_row(row), model.tau);
  }
  return loss;
}

double pseudo_r2(const QuantileModel& model, const DesignMatrix& x, double tau, std::size_t begin,
                 std::optional<std::size_t> end) {
  const std::size_t stop = end.value_or(x.rows());
  if (begin >= stop) throw invalid_argument(kModule, "pseudo_r2 needs a non-empty row range");
  std::span<const double> y(x.target.data() + begin, stop - begin);
  const double c = intercept_only(y, tau);
  double baseline = 0.0;
  for (double v : y) baseline += check_loss(v - c, tau);
  if (!(baseline > 0.0)) throw numerical_error(kModule, "pseudo_r2 undefined: intercept-only loss is zero");
  QuantileModel scored = model;
  scored.tau = tau;
  return 1.0 - total_check_loss(scored, x, begin, stop) / baseline;
}

CvReport expanding_window_cv(const DesignMatrix& x, double tau, std::size_t initial_window, std::size_t step,
                             std::optional<std::size_t> crisis_row) {
  if (step == 0) throw invalid_argument(kModule, "cv step must be positive");
  std::size_t initial = initial_window;
  if (crisis_row && *crisis_row < initial) initial = *crisis_row;
  if (initial < kMinFitRows) {
    throw invalid_argument(kModule, "initial window of " + std::to_string(initial) + " rows is below " +
                                        std::to_string(kMinFitRows));
  }
  if (initial + 2 * step > x.rows()) {
    throw data_error(kModule, "insufficient rows for 2 folds: have " + std::to_string(x.rows()) + ", need " +
                                  std::to_string(initial + 2 * step));
  }

  CvReport report;
  report.tau = tau;
  report.columns = x.columns;
  double abs_err = 0.0, model_loss = 0.0, baseline_loss = 0.0;
  std::size_t tested = 0;
  for (std::size_t train_end = initial; train_end + step <= x.rows(); train_end += step) {
    const DesignMatrix fold_x = restandardize(x, train_end);
    const QuantileModel model = fit_quantile(fold_x, tau, train_end);
    const double base = intercept_only(std::span<const double>(x.target.data(), train_end), tau);

    CvFold fold;
    fold.train_end = train_end;
    fold.test_begin = train_end;
    fold.test_end = train_end + step;
    fold.last_train_month = x.months[train_end - 1];
    fold.first_test_month = x.months[train_end];
    fold.intercept = model.intercept;
    fold.coefficients = model.coefficients;
    std::vector<double> row(x.cols());
    for (std::size_t i = fold.test_begin; i < fold.test_end; ++i) {
      for (std::size_t c = 0; c < x.cols(); ++c) {
        row[c] = fold_x.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      }
      const double err = x.target[i] - model.predict_row(row);
      fold.mae += std::abs(err);
      fold.model_loss += check_loss(err, tau);
      fold.baseline_loss += check_loss(x.target[i] - base, tau);
    }
    abs_err += fold.mae;
    fold.mae /= static_cast<double>(step);
    fold.pseudo_r2 = fold.baseline_loss > 0.0 ? 1.0 - fold.model_loss / fold.baseline_loss : 0.0;
    model_loss += fold.model_loss;
    baseline_loss += fold.baseline_loss;
    tested += step;
    report.folds.push_back(std::move(fold));
  }
  report.pooled_mae = abs_err / static_cast<double>(tested);
  report.pooled_pseudo_r2 = baseline_loss > 0.0 ? 1.0 - model_loss / baseline_loss : 0.0;
  return report;
}

}  // namespace hedgefx::qreg
