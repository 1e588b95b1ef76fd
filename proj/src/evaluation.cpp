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

#include "glatais/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace glatais {

EdgeSet::EdgeSet(Index n, std::vector<std::pair<Index, Index>> edges) : n_(n) {
  for (auto [i, j] : edges) {
    if (i == j) throw ParameterError("edge set cannot contain self-loops");
    if (i < 0 || j < 0 || i >= n || j >= n) throw ParameterError("edge endpoint out of range");
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

EdgeSet EdgeSet::from_graph(const Graph& g) {
  std::vector<std::pair<Index, Index>> pairs;
  for (const Edge& e : g.edges()) pairs.emplace_back(e.i, e.j);
  return EdgeSet(g.num_nodes(), std::move(pairs));
}

bool EdgeSet::contains(Index i, Index j) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::pair{std::min(i, j), std::max(i, j)});
}

void ThresholdSpec::validate() const {
  if (!(value > 0.0)) throw ParameterError("threshold value must be positive");
}

EdgeSet support_from_precision(const Matrix& theta, const ThresholdSpec& t) {
  t.validate();
  if (theta.rows() != theta.cols()) throw ParameterError("precision must be square");
  const Index n = theta.rows();
  double cut = t.value;
  if (t.kind == ThresholdKind::kRelativeToMax) {
    double largest = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) largest = std::max(largest, std::abs(theta(i, j)));
    }
    cut = t.value * largest;
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(theta(i, j)) > cut) pairs.emplace_back(i, j);
    }
  }
  return EdgeSet(n, std::move(pairs));
}

double f_score(const EdgeSet& estimated, const EdgeSet& truth) {
  if (estimated.num_nodes() != truth.num_nodes()) {
    throw ParameterError("edge sets have different node counts");
  }
  if (estimated.empty() && truth.empty()) return 1.0;
  if (estimated.empty() || truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto [i, j] : estimated.edges()) {
    if (truth.contains(i, j)) ++hits;
  }
  if (hits == 0) return 0.0;
  const double precision = static_cast<double>(hits) / static_cast<double>(estimated.size());
  const double recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  return 2.0 * precision * recall / (precision + recall);
}

PrecisionMatrix baseline_standard_gl(const ObservationSet& obs, const GlassoOptions& opts) {
  if (obs.num_samples() < 2) throw ParameterError("standard GL baseline needs R >= 2");
  const Vector mean = obs.x().rowwise().mean();
  const Matrix means = mean.replicate(1, obs.num_samples());
  return graphical_lasso(centered_covariance(obs, means), opts);
}

PrecisionMatrix baseline_oracle_gl(const ObservationSet& obs, const MeanModel& model,
                                   const Vector& phi_true, const GlassoOptions& opts) {
  const Matrix means = mean_matrix(model, phi_true, obs.timestamps());
  return graphical_lasso(centered_covariance(obs, means), opts);
}

RunResult run_atais_inverse(const ObservationSet& obs, const MeanModel& model,
                            const GlAtaisConfig& cfg, std::optional<double> ridge, Rng& rng) {
  if (ridge && !(*ridge >= 0.0)) throw ParameterError("ridge must be nonnegative");
  GlAtaisConfig inv_cfg = cfg;
  inv_cfg.lambda = 0.0;
  const auto step = [ridge](const Matrix& cov) {
    const Index n = cov.rows();
    const double r = ridge ? *ridge : 1e-6 * cov.trace() / static_cast<double>(n);
    const Matrix reg = cov + r * Matrix::Identity(n, n);
    std::optional<Matrix> inv = spd_inverse(reg);
    if (!inv) throw NotPositiveDefiniteError("centered covariance is singular; cannot invert");
    return PrecisionMatrix(std::move(*inv));
  };
  return run_alternating(obs, model, inv_cfg, step, rng);
}

Matrix baseline_atais_inverse(const ObservationSet& obs, const MeanModel& model,
                              const GlAtaisConfig& cfg, std::optional<double> ridge, Rng& rng) {
  return run_atais_inverse(obs, model, cfg, ridge, rng).theta.matrix();
}

}  // namespace glatais
