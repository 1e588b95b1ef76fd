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


// Independent reference implementations used by the tests. Nothing here calls
// into the library's solvers.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oracle {

using Matrix = Eigen::MatrixXd;

inline Matrix soft_threshold_offdiag(const Matrix& a, double t) {
  Matrix out = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i == j) continue;
      const double v = a(i, j);
      out(i, j) = std::copysign(std::max(std::abs(v) - t, 0.0), v);
    }
  }
  return out;
}

/// c (tr(S Theta) - log det Theta) + pen * sum_{i != j} |Theta_ij|, +inf if
/// Theta is not positive definite.
inline double scaled_objective(const Matrix& theta, const Matrix& s, double c, double pen) {
  Eigen::LLT<Matrix> llt(theta);
  if (llt.info() != Eigen::Success) return INFINITY;
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double l1 = theta.cwiseAbs().sum() - theta.diagonal().cwiseAbs().sum();
  return c * ((s * theta).trace() - logdet) + pen * l1;
}

/// Duality gap of the scaled problem at Theta. The dual point is
/// U = clip(Theta^{-1} - S) with |U_ij| <= pen / c off the diagonal and a zero
/// diagonal; the gap is +inf when S + U is not positive definite.
inline double duality_gap(const Matrix& theta, const Matrix& s, double c, double pen) {
  const Eigen::Index n = s.rows();
  const double bound = pen / c;
  Matrix u = theta.inverse() - s;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      u(i, j) = i == j ? 0.0 : std::clamp(u(i, j), -bound, bound);
    }
  }
  u = 0.5 * (u + u.transpose());
  Eigen::LLT<Matrix> llt(s + u);
  if (llt.info() != Eigen::Success) return INFINITY;
  const double dual_logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double dual = c * (dual_logdet + static_cast<double>(n));
  return scaled_objective(theta, s, c, pen) - dual;
}

struct Solution {
  Matrix theta;
  double objective;
  double gap;
};

/// Proximal (projected) gradient descent with backtracking on the scaled
/// objective, run until the duality gap falls below `gap_tol` and the
/// gradient mapping (Theta - prox(Theta - t grad)) / t is below `map_tol` in
/// every entry. Step sizes are
/// Barzilai-Borwein guesses shrunk until Theta stays positive definite and the
/// usual sufficient-decrease bound holds.
inline Solution proximal_gradient(const Matrix& s, double c, double pen, double gap_tol,
                                  double map_tol = 1e-12, int max_iter = 200000) {
  const Eigen::Index n = s.rows();
  Matrix theta = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) theta(i, i) = 1.0 / (s(i, i) + pen / c);
  auto smooth = [&](const Matrix& t) {
    Eigen::LLT<Matrix> llt(t);
    if (llt.info() != Eigen::Success) return double(INFINITY);
    return c * ((s * t).trace() - 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum());
  };
  Matrix grad = c * (s - theta.inverse());
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double f = smooth(theta);
    Matrix next;
    for (int bt = 0; bt < 200; ++bt) {
      next = soft_threshold_offdiag(theta - step * grad, step * pen);
      next = 0.5 * (next + next.transpose());
      const Matrix d = next - theta;
      const double fn = smooth(next);
      const double slack = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
      if (std::isfinite(fn) &&
          fn <= f + grad.cwiseProduct(d).sum() + d.squaredNorm() / (2.0 * step) + slack) {
        break;
      }
      step *= 0.5;
    }
    const Matrix ds = next - theta;
    if (ds.cwiseAbs().maxCoeff() <= map_tol * step) {
      const double gap = duality_gap(next, s, c, pen);
      if (gap <= gap_tol) return {next, scaled_objective(next, s, c, pen), gap};
    }
    const Matrix next_grad = c * (s - next.inverse());
    const Matrix dg = next_grad - grad;
    const double denom = ds.cwiseProduct(dg).sum();
    step = denom > 0.0 ? ds.squaredNorm() / denom : step * 2.0;
    theta = next;
    grad = next_grad;
  }
  throw std::runtime_error("oracle did not converge");
}

/// Minimizer of 1/2 tr(S Theta) - 1/2 log det Theta + lambda sum_{i != j} |Theta_ij|.
inline Solution half_scaled_glasso(const Matrix& s, double lambda, double gap_tol = 1e-10) {
  return proximal_gradient(s, 0.5, lambda, gap_tol);
}

/// Minimizer of tr(S Theta) - log det Theta + rho sum_{i != j} |Theta_ij|.
inline Solution standard_glasso(const Matrix& s, double rho, double gap_tol = 1e-10) {
  return proximal_gradient(s, 1.0, rho, gap_tol);
}

/// Random well-conditioned SPD matrix: a scaled Wishart draw plus a ridge.
template <class Gen>
Matrix random_spd(Eigen::Index n, Gen& gen, double ridge = 0.2) {
  std::normal_distribution<double> z;
  Matrix a(n, 2 * n);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = z(gen);
  }
  Matrix s = a * a.transpose() / static_cast<double>(2 * n);
  s.diagonal().array() += ridge;
  return 0.5 * (s + s.transpose());
}

}  // namespace oracle
