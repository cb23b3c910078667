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

// Quantile regression with declared pairwise interactions.
//
// Features are built from monthly macro series (lags, event dummies),
// z-scored on the training rows, and multiplied pairwise for the declared
// interactions. Since interaction columns are precomputed, every fit is a
// linear quantile program, solved exactly by a bounded-variable simplex on
// its dual.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hedgefx/dataio.hpp"
#include "hedgefx/month.hpp"

namespace hedgefx::qreg {

// Identifiers with this prefix are equity-derived and may never be
// features.
inline constexpr std::string_view kReservedEquityPrefix = "equity";

// rho_tau(u) = u (tau - 1[u < 0]).
double check_loss(double u, double tau);

struct FeatureSchema {
  std::vector<std::string> base_features;                   // continuous, lag 0
  std::map<std::string, std::vector<int>> lag_spec;         // extra lagged copies
  std::map<std::string, std::vector<int>> event_dummies;    // 0/1 series; lag 0 plus listed lags
  std::vector<std::pair<std::string, std::string>> interaction_pairs;  // column identifiers
  std::vector<std::string> excluded;

  // Column identifier for a series at a lag: "m2" or "m2_lag3".
  static std::string column_name(const std::string& series, int lag);
  static std::string interaction_name(const std::string& a, const std::string& b);

  // Throws a config error if any identifier is equity-derived or excluded,
  // if a column is duplicated, or if a pair names an unknown column.
  void validate() const;
};

// Rows are months; columns are the parent (linear) columns followed by one
// column per interaction pair.
struct DesignMatrix {
  std::vector<MonthStamp> months;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;        // standardized parents, then interactions
  std::vector<double> target;

  std::size_t num_parents = 0;
  std::vector<std::pair<std::size_t, std::size_t>> interactions;  // parent indices
  Eigen::MatrixXd raw;            // unstandardized parents
  std::vector<bool> continuous;   // per parent; dummies are not z-scored
  std::vector<double> center;     // per parent
  std::vector<double> scale;      // per parent; 0 marks a degenerate column
  std::size_t dropped_rows = 0;
  std::vector<std::string> warnings;

  std::size_t rows() const { return months.size(); }
  std::size_t cols() const { return columns.size(); }
};

// Builds the design for `target` (a monthly series) from the panel. Rows
// with any missing value are dropped and counted. When `window` is given only
// target months inside it become rows (lags may reach before it).
// Standardization uses all rows; see restandardize() for training windows.
DesignMatrix engineer_features(const std::map<std::string, dataio::MacroSeries>& panel,
                               const FeatureSchema& schema, const dataio::MacroSeries& target,
                               std::optional<dataio::MonthRange> window = std::nullopt);

// Recomputes centers/scales from the first `train_rows` rows, then rebuilds
// standardized parents and interactions for every row.
DesignMatrix restandardize(const DesignMatrix& x, std::size_t train_rows);

// Builds a design directly from a parent matrix, for callers that already
// hold their features. Rows get consecutive months from 2000-01. With
// `standardize` false every parent is used as given (treated like a dummy).
DesignMatrix design_from_matrix(std::vector<std::string> parent_columns, const Eigen::MatrixXd& raw,
                                std::vector<double> target,
                                std::vector<std::pair<std::size_t, std::size_t>> interactions = {},
                                bool standardize = true);

// Elementwise product, the interaction column of two standardized parents.
std::vector<double> interact(std::span<const double> a, std::span<const double> b);

struct QuantileModel {
  double tau = 0.5;
  double intercept = 0.0;
  std::vector<std::string> columns;     // same order as the design
  std::vector<double> coefficients;     // 0 for dropped columns
  std::size_t num_parents = 0;
  std::vector<std::pair<std::size_t, std::size_t>> interactions;
  std::vector<std::string> dropped;     // degenerate or collinear columns
  double objective = 0.0;               // summed check loss on the fit rows
  std::size_t fit_rows = 0;
  int iterations = 0;
  std::vector<std::string> warnings;

  std::map<std::string, double> betas() const;
  std::map<std::pair<std::string, std::string>, double> gammas() const;

  // Prediction for a full design row (parents and interactions).
  double predict_row(std::span<const double> row) const;
  // Prediction from parent values only; interactions are formed here.
  double predict_parents(std::span<const double> parents) const;
};

// Minimizes the summed check loss over the first `rows` rows (all rows when
// unset). Among optimal intercepts for the optimal slopes the lower endpoint
// is returned, i.e. the ceil(tau T)-th order statistic of the residuals.
QuantileModel fit_quantile(const DesignMatrix& x, double tau, std::optional<std::size_t> rows = std::nullopt);

// Intercept-only fit: the ceil(tau T)-th order statistic.
double intercept_only(std::span<const double> y, double tau);

double total_check_loss(const QuantileModel& model, const DesignMatrix& x, std::size_t begin, std::size_t end);

// 1 - loss(model) / loss(intercept-only fitted on the same rows), over rows
// [begin, end) (all rows by default).
double pseudo_r2(const QuantileModel& model, const DesignMatrix& x, double tau, std::size_t begin = 0,
                 std::optional<std::size_t> end = std::nullopt);

struct CvFold {
  std::size_t train_end = 0;   // training rows [0, train_end)
  std::size_t test_begin = 0;  // test rows [test_begin, test_end)
  std::size_t test_end = 0;
  MonthStamp last_train_month;
  MonthStamp first_test_month;
  double mae = 0.0;
  double pseudo_r2 = 0.0;
  double model_loss = 0.0;
  double baseline_loss = 0.0;
  double intercept = 0.0;
  std::vector<double> coefficients;
};

struct CvReport {
  double tau = 0.5;
  std::vector<std::string> columns;
  std::vector<CvFold> folds;
  double pooled_mae = 0.0;
  double pooled_pseudo_r2 = 0.0;
};

// Walk-forward evaluation: fold k trains on the first initial + (k-1) step
// rows and tests on the next `step` rows; only complete folds are used.
// Each fold re-standardizes on its own training rows. If `crisis_row` is set
// and would otherwise sit inside the first training window, the initial
// window is shrunk so the crisis row is tested.
CvReport expanding_window_cv(const DesignMatrix& x, double tau, std::size_t initial_window, std::size_t step,
                             std::optional<std::size_t> crisis_row = std::nullopt);

}  // namespace hedgefx::qreg
