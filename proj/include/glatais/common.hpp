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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace glatais {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Random stream used throughout. Every stochastic operation takes one by
/// reference so that results are reproducible from an explicit seed.
using Rng = std::mt19937_64;

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive definite failed Cholesky factorization.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain of a function (e.g. log of a negative).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The mean function hit a pole.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The optimization problem has no finite minimizer for the given input.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Every particle in a cloud had zero posterior mass.
class DegenerateCloudError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Matrix last_iterate, double residual)
      : Error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const Matrix& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Matrix last_iterate_;
  double residual_;
};

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of `seed`; distinct indices give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

}  // namespace glatais
