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

#include <functional>
#include <memory>
#include <span>
#include <string_view>

#include "glatais/common.hpp"

namespace glatais {

enum class PriorKind { kImproperUniform, kIsotropicGaussian };

/// Prior g(phi) on the mean parameters. Normalizing constants are dropped:
/// only differences of log g enter the MAP argmax and the self-normalized
/// importance weights.
struct PriorSpec {
  PriorKind kind = PriorKind::kImproperUniform;
  double sigma = 1.0;  // used by kIsotropicGaussian only

  static PriorSpec improper() { return {}; }
  static PriorSpec gaussian(double sigma) {
    return {PriorKind::kIsotropicGaussian, sigma};
  }

  void validate() const;
};

/// 0 for the improper prior, -|phi|^2 / (2 sigma^2) for the Gaussian one.
double log_prior(const Vector& phi, const PriorSpec& spec);

/// A mean function with its timestamps fixed. Built once per data set so that
/// time-only factors can be precomputed.
class BoundMean {
 public:
  virtual ~BoundMean() = default;

  /// Writes f_r(phi) into column r of `out` (resized to N x R).
  virtual void fill(const Vector& phi, Matrix& out) const = 0;
};

/// Parametric time-varying mean f_r(phi) = f(phi, tau_r).
class MeanModel {
 public:
  virtual ~MeanModel() = default;

  virtual Index dim_params() const = 0;
  virtual Index dim_nodes() const = 0;

  /// f(phi, tau) in R^N. Throws DomainError outside the evaluator's domain.
  virtual Vector evaluate(const Vector& phi, double tau) const = 0;

  /// Default binding calls evaluate() once per timestamp.
  virtual std::unique_ptr<const BoundMean> bind(std::span<const double> timestamps) const;
};

/// Column r equals model.evaluate(phi, timestamps[r]).
Matrix mean_matrix(const MeanModel& model, const Vector& phi,
                   std::span<const double> timestamps);

/// The ten-node, four-parameter benchmark mean used in the synthetic
/// graph-recovery experiments.
///
///   f1  = -phi4 tau + 5 phi1^2
///   f2  = 2 phi3 sin(-phi2 tau)
///   f3  = phi1 - phi3 + phi1 cos(2 tau)
///   f4  = 3 phi4 + 3 phi2 + phi1 exp(0.1 tau)
///   f5  = phi3^2 - 2 phi1 + 3 phi2 - exp(0.8 phi3) exp(1 - tau)
///   f6  = 5 (phi4 + phi3) - phi2 log(1 + 2 tau)
///   f7  = 3 phi2 - 0.2 tau sin(phi3)
///   f8  = 3 phi1 + 5 phi3 - 20 sin(phi4) cos(2 tau + pi/4)
///   f9  = phi2 + 4 phi4 + 5 exp(1 / (1 + phi3)) tau
///   f10 = 5 phi1 + 10 phi3 - 5 phi4 sin(tau)
///
/// phi is 0-based in code: phi(0) is phi1. Requires phi3 != -1 and tau >= -0.5.
class BenchmarkMean final : public MeanModel {
 public:
  static constexpr Index kParams = 4;
  static constexpr Index kNodes = 10;

  Index dim_params() const override { return kParams; }
  Index dim_nodes() const override { return kNodes; }
  Vector evaluate(const Vector& phi, double tau) const override;
  std::unique_ptr<const BoundMean> bind(std::span<const double> timestamps) const override;
};

/// Shorthand for BenchmarkMean{}.evaluate(phi, tau).
Vector eval_benchmark_mean(const Vector& phi, double tau);

/// Mean given by an arbitrary callable; used for tests and custom models.
class CallableMean final : public MeanModel {
 public:
  using Function = std::function<Vector(const Vector& phi, double tau)>;

  CallableMean(Index dim_params, Index dim_nodes, Function f)
      : dim_params_(dim_params), dim_nodes_(dim_nodes), f_(std::move(f)) {}

  Index dim_params() const override { return dim_params_; }
  Index dim_nodes() const override { return dim_nodes_; }
  Vector evaluate(const Vector& phi, double tau) const override;

 private:
  Index dim_params_;
  Index dim_nodes_;
  Function f_;
};

}  // namespace glatais
