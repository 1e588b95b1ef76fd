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

#include "glatais/mean_model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace glatais {

void PriorSpec::validate() const {
  if (kind == PriorKind::kIsotropicGaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw ParameterError("gaussian prior requires a finite sigma > 0");
  }
}

double log_prior(const Vector& phi, const PriorSpec& spec) {
  switch (spec.kind) {
    case PriorKind::kImproperUniform:
      return 0.0;
    case PriorKind::kIsotropicGaussian:
      return -phi.squaredNorm() / (2.0 * spec.sigma * spec.sigma);
  }
  return 0.0;
}

namespace {

class GenericBoundMean final : public BoundMean {
 public:
  GenericBoundMean(const MeanModel& model, std::span<const double> timestamps)
      : model_(model), timestamps_(timestamps.begin(), timestamps.end()) {}

  void fill(const Vector& phi, Matrix& out) const override {
    out.resize(model_.dim_nodes(), static_cast<Index>(timestamps_.size()));
    for (std::size_t r = 0; r < timestamps_.size(); ++r) {
      out.col(static_cast<Index>(r)) = model_.evaluate(phi, timestamps_[r]);
    }
  }

 private:
  const MeanModel& model_;
  std::vector<double> timestamps_;
};

void check_benchmark_args(const Vector& phi) {
  if (phi.size() != BenchmarkMean::kParams) {
    throw ParameterError("benchmark mean expects 4 parameters");
  }
  if (phi(2) == -1.0) {
    throw SingularityError("benchmark mean is singular at phi3 = -1");
  }
}

void check_benchmark_tau(double tau) {
  if (!(tau >= -0.5)) {
    throw DomainError("benchmark mean requires tau >= -0.5");
  }
}

// Time-only factors of the benchmark mean.
struct TimeFactors {
  double tau;
  double cos_2tau;
  double exp_tenth_tau;
  double exp_one_minus_tau;
  double log_one_plus_2tau;
  double cos_2tau_quarter_pi;
  double sin_tau;

  explicit TimeFactors(double t)
      : tau(t),
        cos_2tau(std::cos(2.0 * t)),
        exp_tenth_tau(std::exp(0.1 * t)),
        exp_one_minus_tau(std::exp(1.0 - t)),
        log_one_plus_2tau(std::log1p(2.0 * t)),
        cos_2tau_quarter_pi(std::cos(2.0 * t + std::numbers::pi / 4.0)),
        sin_tau(std::sin(t)) {}
};

// Parameter-only factors of the benchmark mean.
struct ParamFactors {
  double p1, p2, p3, p4;
  double sin_p3;
  double exp_08_p3;
  double sin_p4;
  double exp_pole;

  explicit ParamFactors(const Vector& phi)
      : p1(phi(0)),
        p2(phi(1)),
        p3(phi(2)),
        p4(phi(3)),
        sin_p3(std::sin(p3)),
        exp_08_p3(std::exp(0.8 * p3)),
        sin_p4(std::sin(p4)),
        exp_pole(std::exp(1.0 / (1.0 + p3))) {}
};

template <typename Out>
void benchmark_column(const ParamFactors& a, const TimeFactors& t, Out&& f) {
  f(0) = -a.p4 * t.tau + 5.0 * a.p1 * a.p1;
  f(1) = 2.0 * a.p3 * std::sin(-a.p2 * t.tau);
  f(2) = a.p1 - a.p3 + a.p1 * t.cos_2tau;
  f(3) = 3.0 * a.p4 + 3.0 * a.p2 + a.p1 * t.exp_tenth_tau;
  f(4) = a.p3 * a.p3 - 2.0 * a.p1 + 3.0 * a.p2 - a.exp_08_p3 * t.exp_one_minus_tau;
  f(5) = 5.0 * (a.p4 + a.p3) - a.p2 * t.log_one_plus_2tau;
  f(6) = 3.0 * a.p2 - 0.2 * t.tau * a.sin_p3;
  f(7) = 3.0 * a.p1 + 5.0 * a.p3 - 20.0 * a.sin_p4 * t.cos_2tau_quarter_pi;
  f(8) = a.p2 + 4.0 * a.p4 + 5.0 * a.exp_pole * t.tau;
  f(9) = 5.0 * a.p1 + 10.0 * a.p3 - 5.0 * a.p4 * t.sin_tau;
}

class BenchmarkBoundMean final : public BoundMean {
 public:
  explicit BenchmarkBoundMean(std::span<const double> timestamps) {
    times_.reserve(timestamps.size());
    for (double tau : timestamps) {
      check_benchmark_tau(tau);
      times_.emplace_back(tau);
    }
  }

  void fill(const Vector& phi, Matrix& out) const override {
    check_benchmark_args(phi);
    const ParamFactors a(phi);
    out.resize(BenchmarkMean::kNodes, static_cast<Index>(times_.size()));
    for (std::size_t r = 0; r < times_.size(); ++r) {
      benchmark_column(a, times_[r], out.col(static_cast<Index>(r)));
    }
  }

 private:
  std::vector<TimeFactors> times_;
};

}  // namespace

std::unique_ptr<const BoundMean> MeanModel::bind(std::span<const double> timestamps) const {
  return std::make_unique<GenericBoundMean>(*this, timestamps);
}

Matrix mean_matrix(const MeanModel& model, const Vector& phi,
                   std::span<const double> timestamps) {
  Matrix out;
  model.bind(timestamps)->fill(phi, out);
  return out;
}

Vector BenchmarkMean::evaluate(const Vector& phi, double tau) const {
  check_benchmark_args(phi);
  check_benchmark_tau(tau);
  Vector f(kNodes);
  benchmark_column(ParamFactors(phi), TimeFactors(tau), f);
  return f;
}

std::unique_ptr<const BoundMean> BenchmarkMean::bind(std::span<const double> timestamps) const {
  return std::make_unique<BenchmarkBoundMean>(timestamps);
}

Vector eval_benchmark_mean(const Vector& phi, double tau) {
  return BenchmarkMean{}.evaluate(phi, tau);
}

Vector CallableMean::evaluate(const Vector& phi, double tau) const {
  if (phi.size() != dim_params_) {
    throw ParameterError("parameter vector has wrong dimension");
  }
  Vector f = f_(phi, tau);
  if (f.size() != dim_nodes_) {
    throw ParameterError("mean callable returned a vector of wrong dimension");
  }
  return f;
}

}  // namespace glatais
