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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "glatais/atais.hpp"

using namespace glatais;

namespace {

// x_r = f(phi) with f(phi, tau) = phi (two nodes, two parameters).
CallableMean identity_mean() {
  return CallableMean(2, 2, [](const Vector& phi, double) { return phi; });
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ObservationSet single(const Vector& x) { return ObservationSet(x, {0.0}); }

Matrix random_spd(Index m, Rng& rng) {
  std::normal_distribution<double> z;
  Matrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) a(i, j) = z(rng);
  }
  return a * a.transpose() + 0.1 * Matrix::Identity(m, m);
}

// log N(x | mu, sigma) written out from the density formula.
double gaussian_log_density(const Vector& x, const Vector& mu, const Matrix& sigma) {
  const Vector e = x - mu;
  const double k = static_cast<double>(x.size());
  return -0.5 * e.dot(sigma.inverse() * e) - 0.5 * std::log(sigma.determinant()) -
         0.5 * k * std::log(2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("proposal validation and density") {
  CHECK_THROWS_AS(ProposalState(Vector::Zero(2), -Matrix::Identity(2, 2)), ParameterError);
  CHECK_THROWS_AS(ProposalState(Vector::Zero(2), Matrix::Identity(3, 3)), ParameterError);
  Rng rng(1);
  const Matrix sigma = random_spd(3, rng);
  Vector mu(3);
  mu << 0.5, -1.0, 2.0;
  const ProposalState prop(mu, sigma);
  Vector x(3);
  x << 1.0, 0.0, 1.5;
  CHECK(prop.log_density(x) == doctest::Approx(gaussian_log_density(x, mu, sigma)).epsilon(1e-12));
}

TEST_CASE("vanishing proposal variance") {
  const ProposalState prop(vec2(1.0, -2.0), 1e-12 * Matrix::Identity(2, 2));
  Rng rng(2);
  const Matrix p = draw_particles(prop, 50, rng);
  CHECK((p.colwise() - prop.mu()).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK_THROWS_AS(draw_particles(prop, 0, rng), ParameterError);
}

TEST_CASE("particle moments") {
  Rng rng(3);
  const ProposalState standard(Vector::Zero(4), Matrix::Identity(4, 4));
  const Matrix p = draw_particles(standard, 100000, rng);
  CHECK(p.rowwise().mean().norm() <= 0.02);

  const Matrix sigma = random_spd(4, rng);
  const Matrix q = draw_particles(ProposalState(Vector::Zero(4), sigma), 100000, rng);
  const Matrix centered = q.colwise() - q.rowwise().mean();
  const Matrix cov = centered * centered.transpose() / 100000.0;
  CHECK((cov - sigma).norm() / sigma.norm() <= 0.05);
}

TEST_CASE("draws are reproducible") {
  const ProposalState prop(vec2(0.0, 0.0), Matrix::Identity(2, 2));
  Rng a(7);
  Rng b(7);
  CHECK(draw_particles(prop, 20, a) == draw_particles(prop, 20, b));
}

TEST_CASE("log posterior examples") {
  const auto model = identity_mean();
  const Vector phi = vec2(0.3, -0.7);
  CHECK(log_posterior(phi, single(phi), model, PrecisionMatrix::identity(2), 0.0,
                      PosteriorScaling::kFull) == 0.0);
  CHECK(log_posterior(phi, single(phi + vec2(1, 1)), model, PrecisionMatrix::identity(2), 0.0,
                      PosteriorScaling::kFull) == doctest::Approx(-1.0));
  const PrecisionMatrix two(2.0 * Matrix::Identity(2, 2));
  CHECK(log_posterior(phi, single(phi), model, two, 0.0, PosteriorScaling::kPaper) ==
        doctest::Approx(0.5 * std::log(4.0)));
}

TEST_CASE("log posterior scaling, penalty and prior terms") {
  const auto model = identity_mean();
  Matrix x(2, 3);
  x << 1.0, 0.0, -1.0, 2.0, 0.5, 1.0;
  const ObservationSet obs(x, {0.0, 1.0, 2.0});
  Matrix t(2, 2);
  t << 2.0, -0.4, -0.4, 1.0;
  const PrecisionMatrix theta(t);
  const Vector phi = vec2(0.2, 0.9);
  double quad = 0.0;
  for (Index r = 0; r < 3; ++r) {
    const Vector e = x.col(r) - phi;
    quad += e.dot(t * e);
  }
  const double logdet = std::log(t.determinant());
  const PriorSpec prior = PriorSpec::gaussian(2.0);
  const double lp = -phi.squaredNorm() / 8.0;
  CHECK(log_posterior(phi, obs, model, theta, 0.3, PosteriorScaling::kPaper, prior) ==
        doctest::Approx(-0.5 * quad + 0.5 * logdet + lp - 0.3 * 0.8));
  CHECK(log_posterior(phi, obs, model, theta, 0.3, PosteriorScaling::kFull, prior) ==
        doctest::Approx(-0.5 * quad + 1.5 * logdet + lp - 0.3 * 0.8));
}

TEST_CASE("points outside the mean domain get zero mass") {
  const CallableMean model(1, 1, [](const Vector& phi, double) -> Vector {
    if (phi(0) < 0.0) throw DomainError("negative");
    return phi;
  });
  Matrix x(1, 1);
  x << 1.0;
  const ObservationSet obs(x, {0.0});
  const PosteriorEvaluator post(obs, model, PriorSpec::improper(), PosteriorScaling::kFull);
  Vector neg(1);
  neg << -1.0;
  CHECK(post(neg, PrecisionMatrix::identity(1), 0.0) == -INFINITY);
  CHECK(post.warmup_objective(neg) == INFINITY);
}

TEST_CASE("map selection examples") {
  const auto model = identity_mean();
  const ObservationSet obs = single(vec2(0.0, 0.0));
  const PosteriorEvaluator post(obs, model, PriorSpec::improper(), PosteriorScaling::kFull);
  const PrecisionMatrix eye = PrecisionMatrix::identity(2);

  Matrix one(2, 1);
  one << 5.0, 5.0;
  CHECK(select_map_particle(one, post, eye, 0.0).index == 0);

  // Residual sums of squares 1.0 and 3.0.
  Matrix two(2, 2);
  two << 1.0, 1.0, 0.0, std::sqrt(2.0);
  const MapSelection sel = select_map_particle(two, post, eye, 0.0);
  CHECK(sel.index == 0);
  CHECK(sel.phi == two.col(0));
  CHECK(sel.log_posterior == doctest::Approx(-0.5));

  Matrix tie(2, 3);
  tie << 2.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  CHECK(select_map_particle(tie, post, eye, 0.0).index == 1);
}

TEST_CASE("map selection minimizes squared residuals under identity precision") {
  Rng rng(4);
  std::normal_distribution<double> z;
  const auto model = identity_mean();
  Matrix x(2, 5);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 5; ++j) x(i, j) = z(rng);
  }
  const ObservationSet obs(x, {0, 1, 2, 3, 4});
  const PosteriorEvaluator post(obs, model, PriorSpec::improper(), PosteriorScaling::kFull);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix p(2, 30);
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 30; ++j) p(i, j) = z(rng);
    }
    Index best = 0;
    double best_rss = INFINITY;
    for (Index j = 0; j < 30; ++j) {
      const double rss = (x.colwise() - p.col(j)).squaredNorm();
      if (rss < best_rss) {
        best_rss = rss;
        best = j;
      }
    }
    CHECK(select_map_particle(p, post, PrecisionMatrix::identity(2), 0.0).index == best);
  }
}

TEST_CASE("argmax ignores additive constants and handles degenerate clouds") {
  Rng rng(5);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(20);
    for (double& x : v) x = 10.0 * z(rng);
    std::vector<double> shifted = v;
    for (double& x : shifted) x += 1234.5;
    CHECK(argmax_log_posterior(v) == argmax_log_posterior(shifted));
  }
  const std::vector<double> dead{-INFINITY, NAN, -INFINITY};
  CHECK_THROWS_AS(argmax_log_posterior(dead), DegenerateCloudError);
  const std::vector<double> one_alive{NAN, -3.0, -INFINITY};
  CHECK(argmax_log_posterior(one_alive) == 1);
}

TEST_CASE("weight normalization examples") {
  Vector lw(2);
  lw << 0.0, std::log(3.0);
  const Vector w = normalize_log_weights(lw);
  CHECK(w(0) == doctest::Approx(0.25));
  CHECK(w(1) == doctest::Approx(0.75));
  const Vector shifted = normalize_log_weights((lw.array() + 1000.0).matrix());
  CHECK((w - shifted).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(normalize_log_weights(Vector::Constant(3, -INFINITY)), DegenerateCloudError);
}

TEST_CASE("target equal to proposal gives uniform weights") {
  const ProposalState prop(vec2(0.5, 1.0), 2.0 * Matrix::Identity(2, 2));
  Rng rng(6);
  const Matrix p = draw_particles(prop, 40, rng);
  std::vector<double> lp;
  for (Index j = 0; j < 40; ++j) lp.push_back(prop.log_density(p.col(j)) + 17.0);
  const ParticleCloud cloud = importance_weights(p, lp, prop);
  CHECK((cloud.norm_weights.array() - 1.0 / 40.0).abs().maxCoeff() <= 1e-12);
  CHECK(effective_sample_size(cloud.norm_weights) == doctest::Approx(40.0));
}

TEST_CASE("weights from the evaluator use log pi - log q") {
  const auto model = identity_mean();
  const ObservationSet obs = single(vec2(0.2, -0.1));
  const PosteriorEvaluator post(obs, model, PriorSpec::improper(), PosteriorScaling::kFull);
  const ProposalState prop(Vector::Zero(2), Matrix::Identity(2, 2));
  Rng rng(7);
  const Matrix p = draw_particles(prop, 10, rng);
  const PrecisionMatrix eye = PrecisionMatrix::identity(2);
  const ParticleCloud cloud = importance_weights(p, post, eye, 0.0, prop);
  for (Index j = 0; j < 10; ++j) {
    CHECK(cloud.log_weights(j) ==
          doctest::Approx(post(p.col(j), eye, 0.0) - prop.log_density(p.col(j))));
  }
}

TEST_CASE("adapt proposal examples") {
  ParticleCloud single_particle;
  single_particle.particles = Matrix::Constant(3, 1, 2.0);
  single_particle.log_weights = Vector::Zero(1);
  single_particle.norm_weights = Vector::Ones(1);
  Vector map(3);
  map << 1.0, 2.0, 3.0;
  const ProposalState a = adapt_proposal(single_particle, map, 0.01);
  CHECK(a.mu() == map);
  CHECK((a.sigma() - 0.01 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-15);

  ParticleCloud pair;
  const Vector v = vec2(0.6, -1.2);
  pair.particles.resize(2, 2);
  pair.particles.col(0) = v;
  pair.particles.col(1) = -v;
  pair.log_weights = Vector::Zero(2);
  pair.norm_weights = Vector::Constant(2, 0.5);
  const ProposalState b = adapt_proposal(pair, vec2(9.0, 9.0), 1e-3);
  const Matrix expected = v * v.transpose() + 1e-3 * Matrix::Identity(2, 2);
  CHECK((b.sigma() - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(b.mu() == vec2(9.0, 9.0));
  CHECK_THROWS_AS(adapt_proposal(pair, v, 0.0), ParameterError);
}

TEST_CASE("importance sampling invariants on random clouds") {
  Rng rng(8);
  std::normal_distribution<double> z;
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_real_distribution<double> spread(0.1, 400.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index p = size(rng);
    const double s = spread(rng);
    Vector lw(p);
    for (Index i = 0; i < p; ++i) lw(i) = s * z(rng);
    const Vector w = normalize_log_weights(lw);
    CHECK((w.array() >= 0.0).all());
    CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
    const Vector shifted = normalize_log_weights((lw.array() + s * z(rng)).matrix());
    CHECK((w - shifted).cwiseAbs().maxCoeff() <= 1e-12);
    const double ess = effective_sample_size(w);
    CHECK(ess >= 1.0 - 1e-12);
    CHECK(ess <= static_cast<double>(p) + 1e-9);

    if (s < 5.0) {
      const Vector naive = lw.array().exp() / lw.array().exp().sum();
      CHECK((w - naive).cwiseAbs().maxCoeff() <= 1e-12);
    }

    const Index m = 1 + trial % 5;
    ParticleCloud cloud;
    cloud.particles.resize(m, p);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < p; ++j) cloud.particles(i, j) = 3.0 * z(rng);
    }
    cloud.log_weights = lw;
    cloud.norm_weights = w;
    const double delta = std::pow(10.0, -1.0 - trial % 6);
    const ProposalState next = adapt_proposal(cloud, Vector::Zero(m), delta);
    CHECK(next.sigma() == next.sigma().transpose());
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(next.sigma()).eigenvalues().minCoeff() >=
          delta * (1.0 - 1e-9));
  }
}
