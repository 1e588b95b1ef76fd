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

#include <memory>
#include <span>
#include <vector>

#include "glatais/common.hpp"
#include "glatais/ggm_core.hpp"
#include "glatais/mean_model.hpp"

namespace glatais {

/// Gaussian proposal q(phi | mu, sigma). Sigma must factorize.
class ProposalState {
 public:
  ProposalState(Vector mu, Matrix sigma);

  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  Index dim() const { return mu_.size(); }

  /// Full Gaussian log-density, normalizing constant included.
  double log_density(const Vector& phi) const;

 private:
  friend Matrix draw_particles(const ProposalState&, Index, Rng&);

  Vector mu_;
  Matrix sigma_;
  Matrix lower_;  // Cholesky factor of sigma
  double log_norm_ = 0.0;
};

/// Particles are stored column-wise (M x P).
struct ParticleCloud {
  Matrix particles;
  Vector log_weights;
  Vector norm_weights;

  Index size() const { return particles.cols(); }
};

/// Which log-determinant weight the conditional log-posterior carries.
///  kPaper: 1/2 log det Theta, as written in the method's log-posterior.
///  kFull:  R/2 log det Theta, the full Gaussian likelihood over R samples.
enum class PosteriorScaling { kPaper, kFull };

/// P i.i.d. draws from the proposal, one per column.
Matrix draw_particles(const ProposalState& prop, Index count, Rng& rng);

/// Conditional log-posterior of phi given X and Theta for a fixed data set.
/// Binds the mean model to the timestamps once so that repeated calls only
/// pay for the phi-dependent work. Overflowing means (non-finite residuals)
/// and points outside the evaluator domain evaluate to -inf.
class PosteriorEvaluator {
 public:
  PosteriorEvaluator(const ObservationSet& obs, const MeanModel& model, PriorSpec prior,
                     PosteriorScaling scaling);

  /// -1/2 sum_r e_r' Theta e_r + c log det Theta + log g(phi) - lambda ||Theta||_1,off
  /// with e_r = x_r - f_r(phi) and c = 1/2 (kPaper) or R/2 (kFull).
  double operator()(const Vector& phi, const PrecisionMatrix& theta, double lambda) const;

  /// One value per particle column.
  std::vector<double> evaluate(const Matrix& particles, const PrecisionMatrix& theta,
                               double lambda) const;

  /// 1/2 sum_r |x_r - f_r(phi)|^2 - log g(phi).
  double warmup_objective(const Vector& phi) const;

  /// N x R matrix of f_r(phi).
  Matrix means(const Vector& phi) const;

  const ObservationSet& observations() const { return obs_; }
  PosteriorScaling scaling() const { return scaling_; }
  const PriorSpec& prior() const { return prior_; }

 private:
  const ObservationSet& obs_;
  std::unique_ptr<const BoundMean> bound_;
  PriorSpec prior_;
  PosteriorScaling scaling_;
};

double log_posterior(const Vector& phi, const ObservationSet& obs, const MeanModel& model,
                     const PrecisionMatrix& theta, double lambda, PosteriorScaling scaling,
                     const PriorSpec& prior = PriorSpec::improper());

struct MapSelection {
  Index index;
  Vector phi;
  double log_posterior;
};

/// Argmax over precomputed log-posteriors; ties go to the lowest index. NaN
/// counts as -inf. Throws DegenerateCloudError if every value is -inf.
Index argmax_log_posterior(std::span<const double> log_posteriors);

MapSelection select_map_particle(const Matrix& particles, const PosteriorEvaluator& posterior,
                                 const PrecisionMatrix& theta, double lambda);

/// Stable softmax of log weights. Throws DegenerateCloudError if all are -inf.
Vector normalize_log_weights(const Vector& log_weights);

/// log w_p = log pi(phi_p) - log q(phi_p), self-normalized with log-sum-exp.
ParticleCloud importance_weights(Matrix particles, std::span<const double> log_posteriors,
                                 const ProposalState& prop);

ParticleCloud importance_weights(const Matrix& particles, const PosteriorEvaluator& posterior,
                                 const PrecisionMatrix& theta, double lambda,
                                 const ProposalState& prop);

/// mu <- phi_map_new, sigma <- weighted particle covariance + delta I.
ProposalState adapt_proposal(const ParticleCloud& cloud, const Vector& phi_map_new, double delta);

/// 1 / sum_p w_p^2 for normalized weights.
double effective_sample_size(const Vector& norm_weights);

}  // namespace glatais
