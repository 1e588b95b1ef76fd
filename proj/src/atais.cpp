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

#include "glatais/atais.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace glatais {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kNegInf : v; }

}  // namespace

ProposalState::ProposalState(Vector mu, Matrix sigma) : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  const Index m = mu_.size();
  if (m == 0) throw ParameterError("proposal dimension must be positive");
  if (sigma_.rows() != m || sigma_.cols() != m) throw ParameterError("proposal covariance has wrong shape");
  if (!mu_.allFinite() || !sigma_.allFinite()) throw ParameterError("proposal has non-finite entries");
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ParameterError("proposal covariance is not symmetric");
  }
  Eigen::LLT<Matrix> llt(sigma_);
  if (llt.info() != Eigen::Success) {
    throw ParameterError("proposal covariance is not positive definite");
  }
  lower_ = llt.matrixL();
  const double log_det = 2.0 * lower_.diagonal().array().log().sum();
  log_norm_ = -0.5 * (static_cast<double>(m) * std::log(2.0 * std::numbers::pi) + log_det);
}

double ProposalState::log_density(const Vector& phi) const {
  const Vector z = lower_.triangularView<Eigen::Lower>().solve(phi - mu_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

Matrix draw_particles(const ProposalState& prop, Index count, Rng& rng) {
  if (count < 1) throw ParameterError("need at least one particle");
  const Index m = prop.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(m, count);
  for (Index p = 0; p < count; ++p) {
    for (Index i = 0; i < m; ++i) z(i, p) = normal(rng);
  }
  Matrix out = prop.lower_.triangularView<Eigen::Lower>() * z;
  out.colwise() += prop.mu_;
  return out;
}

PosteriorEvaluator::PosteriorEvaluator(const ObservationSet& obs, const MeanModel& model,
                                       PriorSpec prior, PosteriorScaling scaling)
    : obs_(obs), bound_(model.bind(obs.timestamps())), prior_(prior), scaling_(scaling) {
  prior_.validate();
  if (model.dim_nodes() != obs.num_nodes()) {
    throw ParameterError("mean model and observations disagree on N");
  }
}

Matrix PosteriorEvaluator::means(const Vector& phi) const {
  Matrix f;
  bound_->fill(phi, f);
  return f;
}

double PosteriorEvaluator::operator()(const Vector& phi, const PrecisionMatrix& theta,
                                      double lambda) const {
  if (theta.size() != obs_.num_nodes()) throw ParameterError("Theta has wrong size");
  Matrix resid;
  try {
    bound_->fill(phi, resid);
  } catch (const DomainError&) {
    return kNegInf;
  }
  resid = obs_.x() - resid;
  const double quad = (theta.matrix() * resid).cwiseProduct(resid).sum();
  if (!std::isfinite(quad)) return kNegInf;
  const double det_weight =
      scaling_ == PosteriorScaling::kPaper ? 0.5 : 0.5 * static_cast<double>(obs_.num_samples());
  return sanitize(-0.5 * quad + det_weight * theta.log_det() + log_prior(phi, prior_) -
                  lambda * theta.off_diagonal_l1());
}

std::vector<double> PosteriorEvaluator::evaluate(const Matrix& particles,
                                                 const PrecisionMatrix& theta,
                                                 double lambda) const {
  std::vector<double> out(static_cast<std::size_t>(particles.cols()));
  for (Index p = 0; p < particles.cols(); ++p) {
    out[static_cast<std::size_t>(p)] = (*this)(particles.col(p), theta, lambda);
  }
  return out;
}

double PosteriorEvaluator::warmup_objective(const Vector& phi) const {
  Matrix resid;
  try {
    bound_->fill(phi, resid);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
  resid = obs_.x() - resid;
  const double v = 0.5 * resid.squaredNorm() - log_prior(phi, prior_);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

double log_posterior(const Vector& phi, const ObservationSet& obs, const MeanModel& model,
                     const PrecisionMatrix& theta, double lambda, PosteriorScaling scaling,
                     const PriorSpec& prior) {
  return PosteriorEvaluator(obs, model, prior, scaling)(phi, theta, lambda);
}

Index argmax_log_posterior(std::span<const double> log_posteriors) {
  Index best = -1;
  double best_value = kNegInf;
  for (std::size_t p = 0; p < log_posteriors.size(); ++p) {
    const double v = sanitize(log_posteriors[p]);
    if (v > best_value) {
      best_value = v;
      best = static_cast<Index>(p);
    }
  }
  if (best < 0) throw DegenerateCloudError("every particle has zero posterior mass");
  return best;
}

MapSelection select_map_particle(const Matrix& particles, const PosteriorEvaluator& posterior,
                                 const PrecisionMatrix& theta, double lambda) {
  if (particles.cols() < 1) throw ParameterError("need at least one particle");
  const std::vector<double> values = posterior.evaluate(particles, theta, lambda);
  const Index best = argmax_log_posterior(values);
  return {best, particles.col(best), values[static_cast<std::size_t>(best)]};
}

Vector normalize_log_weights(const Vector& log_weights) {
  Vector lw = log_weights.unaryExpr([](double v) { return sanitize(v); });
  const double top = lw.size() > 0 ? lw.maxCoeff() : kNegInf;
  if (top == kNegInf) throw DegenerateCloudError("every importance weight is zero");
  if (top == std::numeric_limits<double>::infinity()) {
    throw DegenerateCloudError("an importance weight is infinite");
  }
  Vector w = (lw.array() - top).exp();
  return w / w.sum();
}

ParticleCloud importance_weights(Matrix particles, std::span<const double> log_posteriors,
                                 const ProposalState& prop) {
  const Index count = particles.cols();
  if (static_cast<Index>(log_posteriors.size()) != count) {
    throw ParameterError("one log-posterior per particle required");
  }
  if (particles.rows() != prop.dim()) throw ParameterError("particle dimension differs from proposal");
  Vector log_w(count);
  for (Index p = 0; p < count; ++p) {
    log_w(p) = sanitize(log_posteriors[static_cast<std::size_t>(p)]) -
               prop.log_density(particles.col(p));
  }
  Vector norm_w = normalize_log_weights(log_w);
  return ParticleCloud{std::move(particles), std::move(log_w), std::move(norm_w)};
}

ParticleCloud importance_weights(const Matrix& particles, const PosteriorEvaluator& posterior,
                                 const PrecisionMatrix& theta, double lambda,
                                 const ProposalState& prop) {
  const std::vector<double> values = posterior.evaluate(particles, theta, lambda);
  return importance_weights(particles, values, prop);
}

ProposalState adapt_proposal(const ParticleCloud& cloud, const Vector& phi_map_new, double delta) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  const Matrix& x = cloud.particles;
  const Vector& w = cloud.norm_weights;
  if (phi_map_new.size() != x.rows()) throw ParameterError("MAP point has wrong dimension");
  const Vector centre = x * w;
  const Matrix dev = x.colwise() - centre;
  Matrix cov = dev * w.asDiagonal() * dev.transpose();
  cov = (0.5 * (cov + cov.transpose())).eval();
  cov.diagonal().array() += delta;
  return ProposalState(phi_map_new, std::move(cov));
}

double effective_sample_size(const Vector& norm_weights) {
  return 1.0 / norm_weights.squaredNorm();
}

}  // namespace glatais
