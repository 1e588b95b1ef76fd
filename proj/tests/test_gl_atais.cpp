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


#include <doctest.h>

#include <cmath>

#include "glatais/gl_atais.hpp"
#include "glatais/glasso.hpp"

using namespace glatais;

namespace {

struct Problem {
  BenchmarkMean model;
  PrecisionMatrix theta;
  Vector phi_true;
  ObservationSet obs;
};

Problem benchmark_problem(std::uint64_t seed, Index r) {
  Rng rng(seed);
  const Graph g = generate_er_graph(10, 0.2, rng);
  PrecisionMatrix theta = make_precision(g, 0.5);
  Vector phi(4);
  phi << 0.4, -0.8, 0.6, 1.1;
  BenchmarkMean model;
  ObservationSet obs =
      sample_observations(theta, model, phi, equally_spaced(0.0, 4.0, r), rng);
  return {model, std::move(theta), phi, std::move(obs)};
}

GlAtaisConfig small_config() {
  GlAtaisConfig cfg;
  cfg.iterations = 12;
  cfg.warmup_iterations = 3;
  cfg.particles = 200;
  cfg.lambda = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  GlAtaisConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.warmup_iterations = cfg.iterations;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.warmup_iterations = -1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.particles = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.delta.delta0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("delta schedule") {
  const DeltaSchedule constant{0.5, false};
  CHECK(constant.at(1) == 0.5);
  CHECK(constant.at(7) == 0.5);
  const DeltaSchedule decaying{0.5, true};
  CHECK(decaying.at(4) == doctest::Approx(0.125));
}

TEST_CASE("default initial proposal") {
  const ProposalState p = GlAtaisConfig{}.initial_proposal(4);
  CHECK(p.mu() == Vector::Zero(4));
  CHECK(p.sigma() == 4.0 * Matrix::Identity(4, 4));
}

TEST_CASE("warm-up objective examples") {
  const CallableMean model(2, 2, [](const Vector& phi, double) { return phi; });
  Vector phi(2);
  phi << 0.5, -0.5;
  CHECK(warmup_objective(phi, ObservationSet(phi, {0.0}), model, PriorSpec::improper()) == 0.0);
  Vector x = phi;
  x.array() += 1.0;
  CHECK(warmup_objective(phi, ObservationSet(x, {0.0}), model, PriorSpec::improper()) ==
        doctest::Approx(1.0));
  CHECK(warmup_objective(phi, ObservationSet(x, {0.0}), model, PriorSpec::gaussian(1.0)) ==
        doctest::Approx(1.25));
}

TEST_CASE("initial record") {
  const Problem pr = benchmark_problem(1, 40);
  const GlAtaisConfig cfg = small_config();
  const InitialRecord rec = initial_record(pr.obs, pr.model, cfg);
  CHECK(rec.phi == Vector::Zero(4));
  CHECK(rec.theta.matrix() == Matrix::Identity(10, 10));
  CHECK(std::isfinite(rec.value));
  CHECK(rec.value == log_posterior(rec.phi, pr.obs, pr.model, rec.theta, cfg.lambda,
                                   cfg.scaling, cfg.prior));
}

TEST_CASE("single particle, single iteration") {
  const Problem pr = benchmark_problem(2, 30);
  GlAtaisConfig cfg;
  cfg.iterations = 1;
  cfg.warmup_iterations = 0;
  cfg.particles = 1;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const RunResult res = run_gl_atais(pr.obs, pr.model, cfg, rng);
    REQUIRE(res.trace.iterations.size() == 1);
    const IterationRecord& it = res.trace.iterations[0];
    CHECK(it.selected == 0);
    CHECK(it.accepted == (it.candidate_log_posterior > res.trace.initial->value));
    CHECK(res.phi == (it.accepted ? it.phi_candidate : res.trace.initial->phi));
  }
}

TEST_CASE("zero mean reduces to the plain graphical lasso") {
  Rng data_rng(3);
  const Graph g = generate_er_graph(6, 0.3, data_rng);
  const PrecisionMatrix theta = make_precision(g, 0.3);
  const CallableMean model(2, 6, [](const Vector&, double) { return Vector::Zero(6).eval(); });
  const ObservationSet obs = sample_observations(theta, model, Vector::Zero(2),
                                                 equally_spaced(0.0, 1.0, 300), data_rng);
  GlAtaisConfig cfg = small_config();
  cfg.init_proposal = ProposalState(Vector::Constant(2, 3.0), Matrix::Identity(2, 2));
  Rng rng(4);
  const RunResult res = run_gl_atais(obs, model, cfg, rng);
  const Matrix s = centered_covariance(obs, Matrix::Zero(6, 300));
  const PrecisionMatrix direct = graphical_lasso(s, {cfg.lambda});
  CHECK((res.theta.matrix() - direct.matrix()).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("trace invariants") {
  const Problem pr = benchmark_problem(5, 60);
  GlAtaisConfig cfg = small_config();
  cfg.keep_particles = true;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const RunResult res = run_gl_atais(pr.obs, pr.model, cfg, rng);
    const auto& its = res.trace.iterations;
    REQUIRE(its.size() == static_cast<std::size_t>(cfg.iterations));
    const PosteriorEvaluator post(pr.obs, pr.model, cfg.prior, cfg.scaling);

    Vector prev_phi = res.trace.initial->phi;
    Matrix prev_theta = res.trace.initial->theta.matrix();
    double prev_best = res.trace.initial->value;
    ProposalState prev_prop = cfg.initial_proposal(4);
    for (const IterationRecord& it : its) {
      // Monotone best value; strict on acceptance.
      if (it.accepted) {
        CHECK(it.best_log_posterior > prev_best);
        CHECK(it.phi_map == it.phi_candidate);
        CHECK(it.theta_map == it.theta_candidate);
      } else {
        CHECK(it.best_log_posterior == prev_best);
        CHECK(it.phi_map == prev_phi);
        CHECK(it.theta_map == prev_theta);
      }
      CHECK(it.proposal_mu == it.phi_map);
      CHECK(it.warmup == (it.k <= cfg.warmup_iterations));

      // Selection: warm-up minimizes the warm-up objective, later iterations
      // maximize the posterior under the previous record.
      const Matrix& particles = it.particles;
      REQUIRE(particles.cols() == cfg.particles);
      CHECK(it.phi_candidate == particles.col(it.selected));
      const PrecisionMatrix theta_k =
          it.warmup ? PrecisionMatrix::identity(10) : PrecisionMatrix(prev_theta);
      if (it.warmup) {
        std::vector<double> neg;
        for (Index j = 0; j < particles.cols(); ++j) {
          neg.push_back(-warmup_objective(particles.col(j), pr.obs, pr.model, cfg.prior));
        }
        CHECK(argmax_log_posterior(neg) == it.selected);
      }
      CHECK(select_map_particle(particles, post, theta_k, cfg.lambda).index == it.selected);

      // Weights against theta_k and the proposal the particles came from.
      const ParticleCloud cloud = importance_weights(particles, post, theta_k, cfg.lambda, prev_prop);
      CHECK(effective_sample_size(cloud.norm_weights) == doctest::Approx(it.ess).epsilon(1e-9));
      const ProposalState expected = adapt_proposal(cloud, it.phi_map, cfg.delta.at(it.k));
      CHECK((expected.sigma() - it.proposal_sigma).cwiseAbs().maxCoeff() <=
            1e-9 * std::max(1.0, expected.sigma().cwiseAbs().maxCoeff()));

      prev_phi = it.phi_map;
      prev_theta = it.theta_map;
      prev_best = it.best_log_posterior;
      prev_prop = ProposalState(it.proposal_mu, it.proposal_sigma);
    }
    CHECK(res.phi == its.back().phi_map);
    CHECK(res.theta.matrix() == its.back().theta_map);
  }
}

TEST_CASE("runs are deterministic") {
  const Problem pr = benchmark_problem(6, 50);
  const GlAtaisConfig cfg = small_config();
  Rng a(9);
  Rng b(9);
  const RunResult x = run_gl_atais(pr.obs, pr.model, cfg, a);
  const RunResult y = run_gl_atais(pr.obs, pr.model, cfg, b);
  REQUIRE(x.trace.iterations.size() == y.trace.iterations.size());
  for (std::size_t k = 0; k < x.trace.iterations.size(); ++k) {
    const auto& p = x.trace.iterations[k];
    const auto& q = y.trace.iterations[k];
    CHECK(p.selected == q.selected);
    CHECK(p.phi_candidate == q.phi_candidate);
    CHECK(p.theta_candidate == q.theta_candidate);
    CHECK(p.best_log_posterior == q.best_log_posterior);
    CHECK(p.proposal_sigma == q.proposal_sigma);
  }
}

TEST_CASE("the estimate approaches the truth on easy data") {
  const Problem pr = benchmark_problem(7, 200);
  GlAtaisConfig cfg;
  cfg.particles = 1000;
  cfg.iterations = 20;
  Rng rng(1);
  const RunResult res = run_gl_atais(pr.obs, pr.model, cfg, rng);
  const double at_truth = log_posterior(pr.phi_true, pr.obs, pr.model, res.theta, cfg.lambda,
                                        cfg.scaling);
  CHECK(res.trace.iterations.back().best_log_posterior >= at_truth - 50.0);
}

TEST_CASE("a cloud with no mass raises a run error with the trace") {
  const CallableMean model(1, 2, [](const Vector&, double) -> Vector {
    throw DomainError("nowhere defined");
  });
  const ObservationSet obs(Matrix::Zero(2, 3), {0.0, 1.0, 2.0});
  GlAtaisConfig cfg = small_config();
  Rng rng(1);
  try {
    run_gl_atais(obs, model, cfg, rng);
    FAIL("expected an error");
  } catch (const RunError& e) {
    CHECK(e.iteration() == 1);
    CHECK(e.trace().iterations.empty());
    CHECK(e.trace().initial->value == -INFINITY);
  }
}

TEST_CASE("a custom precision step") {
  const Problem pr = benchmark_problem(8, 40);
  const GlAtaisConfig cfg = small_config();
  Rng rng(2);
  int calls = 0;
  const RunResult res = run_alternating(
      pr.obs, pr.model, cfg,
      [&](const Matrix& cov) {
        ++calls;
        return PrecisionMatrix(cov.inverse());
      },
      rng);
  CHECK(calls == cfg.iterations);
  CHECK(res.trace.iterations.size() == static_cast<std::size_t>(cfg.iterations));
}
