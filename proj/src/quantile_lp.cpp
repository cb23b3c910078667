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

#include "quantile_lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hedgefx::qreg::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dantzig pricing switches to Bland's rule after this many consecutive
// degenerate pivots; any strictly improving step switches back.
constexpr int kDegenerateStreakForBland = 20;

class BoundedSimplex {
 public:
  BoundedSimplex(const Eigen::MatrixXd& x, const Eigen::VectorXd& b)
      : x_(x), b_(b), t_(static_cast<int>(x.rows())), m_(static_cast<int>(x.cols())) {
    const int n = t_ + m_;
    value_.assign(n, 0.0);
    upper_.assign(n, 1.0);
    is_basic_.assign(n, false);
    sign_.assign(m_, 1.0);
    basis_.resize(m_);
    // Structural variables start at their lower bound; one artificial per row
    // absorbs the residual.
    for (int k = 0; k < m_; ++k) {
      sign_[k] = b_(k) >= 0.0 ? 1.0 : -1.0;
      const int j = t_ + k;
      basis_[k] = j;
      is_basic_[j] = true;
      value_[j] = std::abs(b_(k));
      upper_[j] = kInf;
    }
    double scale = 1.0;
    for (int i = 0; i < t_; ++i) scale = std::max(scale, x_.row(i).cwiseAbs().maxCoeff());
    pivot_tol_ = 1e-11 * scale;
  }

  // Minimizes cost'value; returns false when the iteration budget runs out.
  bool optimize(const std::vector<double>& cost, int& budget) {
    cost_ = &cost;
    double cmax = 1.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    const double dtol = 1e-10 * cmax;
    int degenerate_streak = 0;

    while (budget-- > 0) {
      refresh();
      // Pricing.
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      int enter = -1;
      double best = 0.0;
      double dir = 0.0;
      for (int j = 0; j < t_ + m_; ++j) {
        if (is_basic_[j] || upper_[j] == 0.0) continue;
        const double d = reduced_cost(j);
        const bool at_lower = value_[j] == 0.0;
        double gain = 0.0;
        double jdir = 0.0;
        if (at_lower && d < -dtol) {
          gain = -d;
          jdir = 1.0;
        } else if (!at_lower && d > dtol) {
          gain = d;
          jdir = -1.0;
        } else {
          continue;
        }
        if (bland) {
          enter = j;
          dir = jdir;
          break;
        }
        if (gain > best) {
          best = gain;
          enter = j;
          dir = jdir;
        }
      }
      if (enter < 0) return true;

      const Eigen::VectorXd w = lu_.solve(column(enter));
      // Ratio test.
      double step = upper_[enter];  // bound flip of the entering variable
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double dw = dir * w(i);
        const int var = basis_[i];
        double limit = kInf;
        bool to_upper = false;
        if (dw > pivot_tol_) {
          limit = value_[var] / dw;
        } else if (dw < -pivot_tol_ && upper_[var] < kInf) {
          limit = (upper_[var] - value_[var]) / -dw;
          to_upper = true;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        const bool better = limit < step - 1e-14 ||
                            (limit <= step + 1e-14 && leave >= 0 && var < basis_[leave]);
        if (better || (leave < 0 && limit < step)) {
          step = limit;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (step == kInf) return false;  // unbounded; cannot happen for this LP

      degenerate_streak = step <= 1e-12 ? degenerate_streak + 1 : 0;
      value_[enter] += dir * step;
      if (leave < 0) {
        // Pure bound flip.
        value_[enter] = dir > 0 ? upper_[enter] : 0.0;
        continue;
      }
      const int out = basis_[leave];
      value_[out] = leave_to_upper ? upper_[out] : 0.0;
      is_basic_[out] = false;
      is_basic_[enter] = true;
      basis_[leave] = enter;
    }
    return false;
  }

  double artificial_sum() const {
    double s = 0.0;
    for (int k = 0; k < m_; ++k) s += value_[t_ + k];
    return s;
  }

  // Fixes artificials at zero for phase II.
  void close_artificials() {
    for (int k = 0; k < m_; ++k) {
      upper_[t_ + k] = 0.0;
      if (!is_basic_[t_ + k]) value_[t_ + k] = 0.0;
    }
  }

  Eigen::VectorXd multipliers() {
    refresh();
    return pi_;
  }

 private:
  Eigen::VectorXd column(int j) const {
    if (j < t_) return x_.row(j).transpose();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    e(j - t_) = sign_[j - t_];
    return e;
  }

  double reduced_cost(int j) const {
    if (j < t_) return (*cost_)[j] - x_.row(j).dot(pi_);
    return (*cost_)[j] - sign_[j - t_] * pi_(j - t_);
  }

  // Refactors the basis and recomputes basic values and multipliers from
  // scratch, so round-off never accumulates across pivots.
  void refresh() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) {
      basis_matrix.col(i) = column(basis_[i]);
      cb(i) = (*cost_)[basis_[i]];
    }
    lu_.compute(basis_matrix);
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < t_; ++j) {
      if (!is_basic_[j] && value_[j] != 0.0) rhs -= value_[j] * x_.row(j).transpose();
    }
    for (int k = 0; k < m_; ++k) {
      const int j = t_ + k;
      if (!is_basic_[j] && value_[j] != 0.0) rhs(k) -= value_[j] * sign_[k];
    }
    const Eigen::VectorXd xb = lu_.solve(rhs);
    for (int i = 0; i < m_; ++i) {
      const int var = basis_[i];
      // Clip round-off just outside the box.
      value_[var] = std::min(std::max(xb(i), 0.0), upper_[var]);
    }
    pi_ = lu_.transpose().solve(cb);
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& b_;
  int t_;
  int m_;
  std::vector<double> value_;
  std::vector<double> upper_;
  std::vector<bool> is_basic_;
  std::vector<double> sign_;
  std::vector<int> basis_;
  const std::vector<double>* cost_ = nullptr;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd pi_;
  double pivot_tol_ = 1e-11;
};

}  // namespace

LpSolution solve_quantile_lp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double tau, int max_iterations) {
  const int t = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());
  const Eigen::VectorXd b = (1.0 - tau) * x.transpose() * Eigen::VectorXd::Ones(t);

  BoundedSimplex simplex(x, b);
  LpSolution out;
  int budget = max_iterations;

  std::vector<double> phase1(static_cast<std::size_t>(t + m), 0.0);
  for (int k = 0; k < m; ++k) phase1[static_cast<std::size_t>(t + k)] = 1.0;
  if (!simplex.optimize(phase1, budget)) {
    out.iterations = max_iterations - budget;
    return out;
  }
  if (simplex.artificial_sum() > 1e-8 * (1.0 + b.cwiseAbs().sum())) {
    out.iterations = max_iterations - budget;
    return out;
  }
  simplex.close_artificials();

  std::vector<double> phase2(static_cast<std::size_t>(t + m), 0.0);
  for (int i = 0; i < t; ++i) phase2[static_cast<std::size_t>(i)] = -y(i);
  out.converged = simplex.optimize(phase2, budget);
  out.iterations = max_iterations - budget;
  out.beta = -simplex.multipliers();
  return out;
}

}  // namespace hedgefx::qreg::detail
