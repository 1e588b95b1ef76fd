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
#include <span>
#include <utility>
#include <vector>

#include "glatais/common.hpp"
#include "glatais/mean_model.hpp"

namespace glatais {

struct Edge {
  Index i;  // i < j
  Index j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph without self-loops. Edges are kept sorted by
/// (i, j) with i < j.
class Graph {
 public:
  explicit Graph(Index n);

  Index num_nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  /// Inserts or overwrites the edge {i, j}. Rejects self-loops, out-of-range
  /// nodes and zero weights.
  void add_edge(Index i, Index j, double weight = 1.0);
  bool has_edge(Index i, Index j) const;

  /// Symmetric weighted adjacency matrix A.
  Matrix adjacency() const;

 private:
  Index n_;
  std::vector<Edge> edges_;
};

/// Symmetric positive definite matrix. Construction validates symmetry
/// (relative tolerance 1e-12) and factorizes; throws NotPositiveDefiniteError
/// if Cholesky fails.
class PrecisionMatrix {
 public:
  explicit PrecisionMatrix(Matrix theta);

  static PrecisionMatrix identity(Index n) { return PrecisionMatrix(Matrix::Identity(n, n)); }

  const Matrix& matrix() const { return theta_; }
  Index size() const { return theta_.rows(); }
  double log_det() const { return log_det_; }
  const Eigen::LLT<Matrix>& cholesky() const { return llt_; }

  /// Sum of |theta_ij| over i != j (both triangles).
  double off_diagonal_l1() const;

  Matrix inverse() const;

 private:
  Matrix theta_;
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
};

/// N x R sample matrix with one timestamp per column.
class ObservationSet {
 public:
  ObservationSet(Matrix x, std::vector<double> timestamps);

  const Matrix& x() const { return x_; }
  const std::vector<double>& timestamps() const { return timestamps_; }
  Index num_nodes() const { return x_.rows(); }
  Index num_samples() const { return x_.cols(); }

 private:
  Matrix x_;
  std::vector<double> timestamps_;
};

/// Inverse of a symmetric positive definite matrix, or nullopt when Cholesky
/// fails or the reciprocal condition estimate is below 1e-14.
std::optional<Matrix> spd_inverse(const Matrix& a);

/// Erdos-Renyi graph: each of the n(n-1)/2 pairs independently with
/// probability p, unit weight.
Graph generate_er_graph(Index n, double p, Rng& rng);

/// Theta = A + eps I with eps = max(0, -lambda_min(A)) + eps_margin.
PrecisionMatrix make_precision(const Graph& g, double eps_margin = 0.1);

/// R equally spaced points on [lo, hi]; a single point sits at lo.
std::vector<double> equally_spaced(double lo, double hi, Index count);

/// Column r is f_r(phi_true) + v_r with v_r ~ N(0, Theta^{-1}), drawn as
/// L^{-T} z for Theta = L L^T and z standard normal.
ObservationSet sample_observations(const PrecisionMatrix& theta, const MeanModel& mean,
                                   const Vector& phi_true,
                                   std::span<const double> timestamps, Rng& rng);

/// (1/R) sum_r (x_r - m_r)(x_r - m_r)^T.
Matrix centered_covariance(const ObservationSet& obs, const Matrix& means);

}  // namespace glatais
