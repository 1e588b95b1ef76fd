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

#include "glatais/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace glatais {

namespace {

constexpr int kMaxLineSearchHalvings = 60;
constexpr double kArmijo = 1e-4;

void check_covariance(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) throw ParameterError("S must be square and nonempty");
  if (!s.allFinite()) throw ParameterError("S has non-finite entries");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ParameterError("S is not symmetric");
  }
}

// Entrywise optimality violation for the half-scaled objective with a
// per-entry off-diagonal penalty.
Matrix kkt_violations(const Matrix& theta, const Matrix& w, const Matrix& s, const Matrix& penalty) {
  const Index n = theta.rows();
  Matrix v(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double g = 0.5 * (s(i, j) - w(i, j));
      if (i == j) {
        v(i, j) = std::abs(g);
      } else if (theta(i, j) == 0.0) {
        v(i, j) = std::max(0.0, std::abs(g) - penalty(i, j));
      } else {
        v(i, j) = std::abs(g + penalty(i, j) * (theta(i, j) > 0.0 ? 1.0 : -1.0));
      }
    }
  }
  return v;
}

// Upper-triangle coordinates (i <= j) of a symmetric matrix.
struct Pair {
  Index i;
  Index j;
};

std::vector<Pair> upper_pairs(Index n) {
  std::vector<Pair> pairs;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) pairs.push_back({i, j});
  }
  return pairs;
}

// Minimizes 1/2 z'Qz + r'z + sum_p rho_p |z_p| exactly by feature-sign search:
// solve the unconstrained problem on the active set for a fixed sign pattern,
// move to the best point on the segment towards it (stopping where entries
// cross zero), and activate the most violating zero entry once the active set
// is sign consistent. Entries with rho_p = 0 are always active.
class FeatureSignLasso {
 public:
  FeatureSignLasso(const Matrix& q, const Vector& r, const Vector& rho)
      : q_(q), r_(r), rho_(rho), active_(static_cast<std::size_t>(r.size())), sign_(r.size()) {}

  void solve(Vector& z) {
    const Index m = z.size();
    for (Index p = 0; p < m; ++p) {
      active_[static_cast<std::size_t>(p)] = rho_(p) == 0.0 || z(p) != 0.0;
      sign_(p) = sign_of(z(p));
    }
    const int guard = 50 * static_cast<int>(m) + 100;
    for (int round = 0; round < guard; ++round) {
      Status status = Status::kProgress;
      for (int inner = 0; inner < guard && status == Status::kProgress; ++inner) {
        status = active_set_step(z);
      }
      if (status == Status::kStuck) return;

      const Vector grad = q_ * z + r_;
      Index entering = -1;
      double worst = 0.0;
      for (Index p = 0; p < m; ++p) {
        if (active_[static_cast<std::size_t>(p)]) continue;
        const double excess = std::abs(grad(p)) - rho_(p);
        if (excess > worst && excess > 1e-13 * std::max(1.0, rho_(p))) {
          worst = excess;
          entering = p;
        }
      }
      if (entering < 0) return;
      active_[static_cast<std::size_t>(entering)] = 1;
      sign_(entering) = grad(entering) > 0.0 ? -1.0 : 1.0;
    }
  }

 private:
  enum class Status { kConsistent, kProgress, kStuck };

  static double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  double objective(const Vector& z) const {
    return 0.5 * z.dot(q_ * z) + r_.dot(z) + rho_.dot(z.cwiseAbs());
  }

  Status active_set_step(Vector& z) {
    const Index m = z.size();
    std::vector<Index> idx;
    for (Index p = 0; p < m; ++p) {
      if (active_[static_cast<std::size_t>(p)]) idx.push_back(p);
    }
    const auto k = static_cast<Index>(idx.size());
    if (k == 0) return Status::kConsistent;

    Matrix qa(k, k);
    Vector rhs(k);
    for (Index a = 0; a < k; ++a) {
      const Index p = idx[static_cast<std::size_t>(a)];
      rhs(a) = -(r_(p) + rho_(p) * sign_(p));
      for (Index b = 0; b < k; ++b) qa(a, b) = q_(p, idx[static_cast<std::size_t>(b)]);
    }
    const Vector target = qa.ldlt().solve(rhs);
    Vector z_new = z;
    for (Index a = 0; a < k; ++a) z_new(idx[static_cast<std::size_t>(a)]) = target(a);

    bool consistent = true;
    for (Index p : idx) {
      if (rho_(p) != 0.0 && sign_of(z_new(p)) != sign_(p)) consistent = false;
    }
    if (consistent) {
      z = z_new;
      return Status::kConsistent;
    }

    // Best point among the target and the zero crossings on the segment.
    Vector best = z_new;
    double best_obj = objective(z_new);
    for (Index p : idx) {
      if (rho_(p) == 0.0 || z(p) == 0.0 || sign_of(z_new(p)) == sign_of(z(p))) continue;
      const double t = z(p) / (z(p) - z_new(p));
      Vector cand = z + t * (z_new - z);
      cand(p) = 0.0;
      const double obj = objective(cand);
      if (obj < best_obj) {
        best_obj = obj;
        best = std::move(cand);
      }
    }
    if (!(best_obj < objective(z))) return Status::kStuck;

    z = best;
    for (Index p : idx) {
      if (rho_(p) == 0.0) continue;
      sign_(p) = sign_of(z(p));
      if (z(p) == 0.0) active_[static_cast<std::size_t>(p)] = 0;
    }
    return Status::kProgress;
  }

  const Matrix& q_;
  const Vector& r_;
  const Vector& rho_;
  std::vector<char> active_;
  Vector sign_;
};

}  // namespace

void GlassoOptions::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be >= 0");
  if (max_iter < 1) throw ParameterError("max_iter must be positive");
  if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
}

double gl_objective(const PrecisionMatrix& theta, const Matrix& s, double lambda) {
  if (s.rows() != theta.size() || s.cols() != theta.size()) {
    throw ParameterError("S and Theta differ in size");
  }
  const double trace = (s.cwiseProduct(theta.matrix())).sum();
  return 0.5 * trace - 0.5 * theta.log_det() + lambda * theta.off_diagonal_l1();
}

double kkt_residual(const PrecisionMatrix& theta, const Matrix& s, double lambda) {
  const Index n = theta.size();
  if (s.rows() != n || s.cols() != n) throw ParameterError("S and Theta differ in size");
  const Matrix penalty = Matrix::Constant(n, n, lambda);
  return kkt_violations(theta.matrix(), theta.inverse(), s, penalty).maxCoeff();
}

GlassoResult solve_graphical_lasso(const Matrix& s_in, const GlassoOptions& opts) {
  opts.validate();
  check_covariance(s_in);
  const Matrix s = 0.5 * (s_in + s_in.transpose());
  const Index n = s.rows();

  if (opts.lambda == 0.0) {
    std::optional<Matrix> inv = spd_inverse(s);
    if (!inv) throw InfeasibleError("S is singular; the unpenalized problem has no minimizer");
    PrecisionMatrix theta(std::move(*inv));
    const double kkt = kkt_residual(theta, s, 0.0);
    const double obj = gl_objective(theta, s, 0.0);
    return GlassoResult{std::move(theta), 0, kkt, {obj}};
  }

  if (s.isZero(0.0)) throw InfeasibleError("S = 0 has no finite minimizer");
  if ((s.diagonal().array() <= 0.0).any()) {
    throw InfeasibleError("S has a nonpositive diagonal entry; no finite minimizer");
  }

  // Work on the correlation matrix C = D^{-1} S D^{-1}. With Theta = D^{-1} Omega D^{-1}
  // the objective becomes the same problem in Omega with penalty
  // lambda / (d_i d_j) on entry (i, j), which is far better conditioned when
  // the variances differ by orders of magnitude.
  const Vector d = s.diagonal().cwiseSqrt();
  const Vector d_inv = d.cwiseInverse();
  const Matrix c = d_inv.asDiagonal() * s * d_inv.asDiagonal();
  const Matrix scale = d * d.transpose();  // d_i d_j
  const Matrix penalty = (opts.lambda * scale.cwiseInverse()).eval();
  // The optimality violation on the original scale is d_i d_j times the
  // scaled one.
  const Matrix normalized_scale = scale.cwiseQuotient(scale.cwiseMax(1.0));

  const std::vector<Pair> pairs = upper_pairs(n);
  const auto m = static_cast<Index>(pairs.size());
  Vector rho(m);
  for (Index p = 0; p < m; ++p) {
    const Pair& e = pairs[static_cast<std::size_t>(p)];
    // Off-diagonal pairs appear twice in the symmetric penalty.
    rho(p) = e.i == e.j ? 0.0 : 2.0 * penalty(e.i, e.j);
  }

  auto unscale = [&](const Matrix& om) -> Matrix {
    Matrix t = d_inv.asDiagonal() * om * d_inv.asDiagonal();
    return 0.5 * (t + t.transpose());
  };
  // Scaled objective; differs from the original by the constant log det D.
  auto scaled_objective = [&](const Matrix& om, const Eigen::LLT<Matrix>& llt) {
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return 0.5 * c.cwiseProduct(om).sum() - 0.5 * log_det +
           penalty.cwiseProduct(om.cwiseAbs()).sum() -
           penalty.diagonal().dot(om.diagonal().cwiseAbs());
  };

  Matrix omega = Matrix::Identity(n, n);
  Eigen::LLT<Matrix> llt(omega);
  Matrix w = Matrix::Identity(n, n);
  double f = scaled_objective(omega, llt);

  GlassoResult result{PrecisionMatrix(unscale(omega)), 0, 0.0, {}};
  result.objective_trace.push_back(gl_objective(result.theta, s, opts.lambda));

  Matrix q(m, m);
  Vector lin(m);
  Vector z(m);
  Vector omega_vec(m);
  auto finish = [&] {
    result.kkt = kkt_residual(result.theta, s, opts.lambda);
    return result;
  };
  for (int iter = 1;; ++iter) {
    const Matrix violations = kkt_violations(omega, w, c, penalty);
    if (violations.cwiseProduct(scale).maxCoeff() <= opts.tol) return finish();
    // Once no further descent is possible, a badly scaled S is accepted at
    // the normalized tolerance.
    const bool normalized_ok =
        violations.cwiseProduct(normalized_scale).maxCoeff() <= opts.tol;
    if (iter > opts.max_iter) break;

    // Quadratic model of the smooth part around Omega:
    //   tr(G D) + 1/4 tr(W D W D),  G = (C - W) / 2,
    // in the upper-triangle coordinates u_p of D.
    const Matrix grad = 0.5 * (c - w);
    for (Index p = 0; p < m; ++p) {
      const Pair& a = pairs[static_cast<std::size_t>(p)];
      lin(p) = a.i == a.j ? grad(a.i, a.i) : 2.0 * grad(a.i, a.j);
      omega_vec(p) = omega(a.i, a.j);
      for (Index t = p; t < m; ++t) {
        const Pair& b = pairs[static_cast<std::size_t>(t)];
        // 1/2 tr(E_a W E_b W) for E = e_i e_j' (+ e_j e_i' off the diagonal).
        double v = w(a.j, b.i) * w(b.j, a.i);
        if (b.i != b.j) v += w(a.j, b.j) * w(b.i, a.i);
        if (a.i != a.j) {
          v += w(a.i, b.i) * w(b.j, a.j);
          if (b.i != b.j) v += w(a.i, b.j) * w(b.i, a.j);
        }
        q(p, t) = 0.5 * v;
        q(t, p) = 0.5 * v;
      }
    }
    // In z = omega + u the model is 1/2 z'Qz + (lin - Q omega)'z + sum rho |z|.
    const Vector r = lin - q * omega_vec;
    z = omega_vec;
    FeatureSignLasso(q, r, rho).solve(z);
    const Vector u = z - omega_vec;

    Matrix step = Matrix::Zero(n, n);
    for (Index p = 0; p < m; ++p) {
      const Pair& a = pairs[static_cast<std::size_t>(p)];
      step(a.i, a.j) = u(p);
      step(a.j, a.i) = u(p);
    }
    const double decrease =
        lin.dot(u) + rho.dot((z.cwiseAbs() - omega_vec.cwiseAbs()).eval());
    if (!(decrease < 0.0)) {
      if (normalized_ok) return finish();
      break;
    }

    bool moved = false;
    double alpha = 1.0;
    for (int h = 0; h < kMaxLineSearchHalvings; ++h, alpha *= 0.5) {
      Matrix trial = omega + alpha * step;
      Eigen::LLT<Matrix> trial_llt(trial);
      if (trial_llt.info() != Eigen::Success) continue;
      const double f_trial = scaled_objective(trial, trial_llt);
      // The slack admits steps whose predicted gain is below the rounding
      // level of f; the KKT test above still decides convergence.
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
      const double armijo = f + kArmijo * alpha * decrease;
      if (f_trial > armijo && normalized_ok) return finish();
      if (f_trial <= armijo + slack) {
        omega = std::move(trial);
        llt = std::move(trial_llt);
        f = f_trial;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (normalized_ok) return finish();
      break;
    }

    w = llt.solve(Matrix::Identity(n, n));
    w = 0.5 * (w + w.transpose()).eval();
    result.theta = PrecisionMatrix(unscale(omega));
    result.sweeps = iter;
    result.objective_trace.push_back(gl_objective(result.theta, s, opts.lambda));
  }
  throw ConvergenceError("graphical lasso did not reach tol " + std::to_string(opts.tol) +
                             " in " + std::to_string(opts.max_iter) + " iterations",
                         unscale(omega), kkt_residual(result.theta, s, opts.lambda));
}

PrecisionMatrix graphical_lasso(const Matrix& s, const GlassoOptions& opts) {
  return solve_graphical_lasso(s, opts).theta;
}

}  // namespace glatais
