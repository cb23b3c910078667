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

#include <Eigen/Dense>

namespace hedgefx::qreg::detail {

struct LpSolution {
  Eigen::VectorXd beta;
  int iterations = 0;
  bool converged = false;
};

// Solves min_beta sum_i rho_tau(y_i - x_i' beta) through its dual
//
//   max y'a  s.t.  X'a = (1 - tau) X'1,  0 <= a <= 1,
//
// with a two-phase bounded-variable revised simplex. beta is read off the
// simplex multipliers of the optimal basis, so it interpolates p
// observations exactly. X must have full column rank.
LpSolution solve_quantile_lp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double tau, int max_iterations);

}  // namespace hedgefx::qreg::detail
