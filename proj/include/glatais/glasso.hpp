// Copyright 2026 The glatais Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "glatais/common.hpp"
#include "glatais/ggm_core.hpp"

namespace glatais {

/// Options for the l1-penalized precision estimator.
///
/// The objective is the half-scaled form
///
///   1/2 tr(S Theta) - 1/2 log det Theta + lambda * sum_{i != j} |Theta_ij|
///
/// Tools that minimize tr(S Theta) - log det Theta + rho * ||Theta||_1 (off
/// diagonal) give the same minimizer with rho = 2 * lambda.
struct GlassoOptions {
  double lambda = 0.1;
  int max_iter = 500;  // outer Newton iterations
  /// Stopping tolerance on kkt_residual. When S is so badly scaled that no
  /// further descent is possible at working precision, the violation of entry
  /// (i, j) divided by max(1, sqrt(S_ii S_jj)) is tested instead.
  double tol = 1e-6;

  void validate() const;
};

struct GlassoResult {
  PrecisionMatrix theta;
  int sweeps = 0;
  double kkt = 0.0;
  /// Objective after initialization and after each iteration.
  std::vector<double> objective_trace;
};

/// Proximal Newton method on the diagonally rescaled problem. Each iteration
/// minimizes the second-order model of the smooth part plus the l1 term
/// exactly (feature-sign active set search), then backtracks along the step
/// until Theta stays positive definite and the objective decreases enough.
/// Every iterate is positive definite and the objective never increases.
/// Off-diagonal zeros are exact. lambda = 0 returns S^{-1} directly.
///
/// Throws ParameterError for non-symmetric S, InfeasibleError when no finite
/// minimizer exists (singular S at lambda = 0, or a zero diagonal entry of S),
/// and ConvergenceError after max_iter iterations.
GlassoResult solve_graphical_lasso(const Matrix& s, const GlassoOptions& opts);

/// solve_graphical_lasso(s, opts).theta
PrecisionMatrix graphical_lasso(const Matrix& s, const GlassoOptions& opts);

double gl_objective(const PrecisionMatrix& theta, const Matrix& s, double lambda);

/// Largest violation of the optimality conditions of the half-scaled
/// objective, with W = Theta^{-1} and G = (S - W) / 2:
///   |G_ii| on the diagonal,
///   max(0, |G_ij| - lambda) where Theta_ij = 0,
///   |G_ij + lambda sign(Theta_ij)| elsewhere.
double kkt_residual(const PrecisionMatrix& theta, const Matrix& s, double lambda);

}  // namespace glatais
