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

#include <optional>
#include <utility>
#include <vector>

#include "glatais/common.hpp"
#include "glatais/ggm_core.hpp"
#include "glatais/gl_atais.hpp"
#include "glatais/glasso.hpp"
#include "glatais/mean_model.hpp"

namespace glatais {

/// Unordered node pairs (i < j), sorted.
class EdgeSet {
 public:
  explicit EdgeSet(Index n) : n_(n) {}
  EdgeSet(Index n, std::vector<std::pair<Index, Index>> edges);

  static EdgeSet from_graph(const Graph& g);

  Index num_nodes() const { return n_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
  bool contains(Index i, Index j) const;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  Index n_;
  std::vector<std::pair<Index, Index>> edges_;
};

enum class ThresholdKind { kAbsolute, kRelativeToMax };

struct ThresholdSpec {
  ThresholdKind kind = ThresholdKind::kAbsolute;
  double value = 1e-4;

  void validate() const;
};

/// Edges (i, j) with |Theta_ij| > t, where t is `value` (absolute) or
/// `value * max_{i != j} |Theta_ij|` (relative).
EdgeSet support_from_precision(const Matrix& theta, const ThresholdSpec& t = {});

/// Harmonic mean of edge precision and recall. Both empty gives 1, exactly one
/// empty gives 0.
double f_score(const EdgeSet& estimated, const EdgeSet& truth);

/// Graphical lasso after removing the pooled sample mean from every column.
PrecisionMatrix baseline_standard_gl(const ObservationSet& obs, const GlassoOptions& opts);

/// Graphical lasso after removing the true mean f_r(phi_true).
PrecisionMatrix baseline_oracle_gl(const ObservationSet& obs, const MeanModel& model,
                                   const Vector& phi_true, const GlassoOptions& opts);

/// The alternating loop with the precision update replaced by (Sigma-hat + ridge I)^{-1}.
/// Without an explicit ridge, 1e-6 tr(Sigma-hat) / N is used at each step.
/// The sparsity penalty is dropped from the log-posterior (lambda = 0), as
/// this estimator has no l1 term.
RunResult run_atais_inverse(const ObservationSet& obs, const MeanModel& model,
                            const GlAtaisConfig& cfg, std::optional<double> ridge, Rng& rng);

/// Final dense precision of run_atais_inverse.
Matrix baseline_atais_inverse(const ObservationSet& obs, const MeanModel& model,
                              const GlAtaisConfig& cfg, std::optional<double> ridge, Rng& rng);

}  // namespace glatais
