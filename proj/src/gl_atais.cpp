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

#include "glatais/gl_atais.hpp"

#include <string>

namespace glatais {

void GlAtaisConfig::validate() const {
  if (iterations < 1) throw ParameterError("K must be at least 1");
  if (warmup_iterations < 0 || warmup_iterations >= iterations) {
    throw ParameterError("K0 must satisfy 0 <= K0 < K");
  }
  if (particles < 1) throw ParameterError("P must be at least 1");
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (!(delta.delta0 > 0.0)) throw ParameterError("delta must be positive");
  prior.validate();
  glasso.validate();
}

ProposalState GlAtaisConfig::initial_proposal(Index dim_params) const {
  if (init_proposal) {
    if (init_proposal->dim() != dim_params) {
      throw ParameterError("initial proposal dimension differs from the mean model");
    }
    return *init_proposal;
  }
  return ProposalState(Vector::Zero(dim_params), 4.0 * Matrix::Identity(dim_params, dim_params));
}

double warmup_objective(const Vector& phi, const ObservationSet& obs, const MeanModel& model,
                        const PriorSpec& prior) {
  const Matrix resid = obs.x() - mean_matrix(model, phi, obs.timestamps());
  return 0.5 * resid.squaredNorm() - log_prior(phi, prior);
}

InitialRecord initial_record(const ObservationSet& obs, const MeanModel& model,
                             const GlAtaisConfig& cfg) {
  cfg.validate();
  const PosteriorEvaluator posterior(obs, model, cfg.prior, cfg.scaling);
  Vector phi = cfg.initial_proposal(model.dim_params()).mu();
  PrecisionMatrix theta = PrecisionMatrix::identity(obs.num_nodes());
  const double value = posterior(phi, theta, cfg.lambda);
  return {std::move(phi), std::move(theta), value};
}

RunResult run_alternating(const ObservationSet& obs, const MeanModel& model,
                          const GlAtaisConfig& cfg, const PrecisionStep& step, Rng& rng) {
  cfg.validate();
  const PosteriorEvaluator posterior(obs, model, cfg.prior, cfg.scaling);
  const PrecisionMatrix identity = PrecisionMatrix::identity(obs.num_nodes());

  RunTrace trace;
  trace.initial = initial_record(obs, model, cfg);
  Vector phi_map = trace.initial->phi;
  PrecisionMatrix theta_map = trace.initial->theta;
  double best = trace.initial->value;
  ProposalState proposal = cfg.initial_proposal(model.dim_params());

  for (int k = 1; k <= cfg.iterations; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.warmup = k <= cfg.warmup_iterations;
    try {
      // MAP particle under the current (or identity) precision.
      const PrecisionMatrix& theta_k = rec.warmup ? identity : theta_map;
      Matrix particles = draw_particles(proposal, cfg.particles, rng);
      const std::vector<double> values = posterior.evaluate(particles, theta_k, cfg.lambda);
      rec.selected = argmax_log_posterior(values);
      rec.phi_candidate = particles.col(rec.selected);

      // Precision from the re-centered data.
      const Matrix cov = centered_covariance(obs, posterior.means(rec.phi_candidate));
      PrecisionMatrix theta_candidate = step(cov);
      rec.theta_candidate = theta_candidate.matrix();

      // Acceptance, weights and proposal adaptation.
      rec.candidate_log_posterior = posterior(rec.phi_candidate, theta_candidate, cfg.lambda);
      rec.accepted = rec.candidate_log_posterior > best;
      if (rec.accepted) {
        phi_map = rec.phi_candidate;
        theta_map = std::move(theta_candidate);
        best = rec.candidate_log_posterior;
      }
      if (cfg.keep_particles) rec.particles = particles;
      const ParticleCloud cloud = importance_weights(std::move(particles), values, proposal);
      rec.ess = effective_sample_size(cloud.norm_weights);
      proposal = adapt_proposal(cloud, phi_map, cfg.delta.at(k));
    } catch (const Error& e) {
      throw RunError("iteration " + std::to_string(k) + ": " + e.what(), k, std::move(trace));
    }
    rec.phi_map = phi_map;
    rec.theta_map = theta_map.matrix();
    rec.best_log_posterior = best;
    rec.proposal_mu = proposal.mu();
    rec.proposal_sigma = proposal.sigma();
    trace.iterations.push_back(std::move(rec));
  }
  return RunResult{std::move(theta_map), std::move(phi_map), std::move(trace)};
}

RunResult run_gl_atais(const ObservationSet& obs, const MeanModel& model,
                       const GlAtaisConfig& cfg, Rng& rng) {
  const GlassoOptions opts = [&] {
    GlassoOptions o = cfg.glasso;
    o.lambda = cfg.lambda;
    return o;
  }();
  return run_alternating(
      obs, model, cfg, [&](const Matrix& cov) { return graphical_lasso(cov, opts); }, rng);
}

}  // namespace glatais
