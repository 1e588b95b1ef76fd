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

#include "glatais/ggm_core.hpp"

#include <algorithm>
#include <cmath>

namespace glatais {

Graph::Graph(Index n) : n_(n) {
  if (n < 1) throw ParameterError("graph needs at least one node");
}

void Graph::add_edge(Index i, Index j, double weight) {
  if (i == j) throw ParameterError("self-loops are not allowed");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ParameterError("edge endpoint out of range");
  if (weight == 0.0 || !std::isfinite(weight)) throw ParameterError("edge weight must be finite and nonzero");
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{i, j},
                             [](const Edge& e, const std::pair<Index, Index>& key) {
                               return std::pair{e.i, e.j} < key;
                             });
  if (it != edges_.end() && it->i == i && it->j == j) {
    it->weight = weight;
  } else {
    edges_.insert(it, Edge{i, j, weight});
  }
}

bool Graph::has_edge(Index i, Index j) const {
  if (i > j) std::swap(i, j);
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.i == i && e.j == j; });
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i, e.j) = e.weight;
    a(e.j, e.i) = e.weight;
  }
  return a;
}

PrecisionMatrix::PrecisionMatrix(Matrix theta) : theta_(std::move(theta)) {
  if (theta_.rows() != theta_.cols() || theta_.rows() == 0) {
    throw ParameterError("precision matrix must be square and nonempty");
  }
  if (!theta_.allFinite()) throw ParameterError("precision matrix has non-finite entries");
  const double scale = std::max(1.0, theta_.cwiseAbs().maxCoeff());
  if ((theta_ - theta_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ParameterError("precision matrix is not symmetric");
  }
  llt_.compute(theta_);
  if (llt_.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("precision matrix is not positive definite");
  }
  log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double PrecisionMatrix::off_diagonal_l1() const {
  return theta_.cwiseAbs().sum() - theta_.diagonal().cwiseAbs().sum();
}

Matrix PrecisionMatrix::inverse() const {
  Matrix inv = llt_.solve(Matrix::Identity(size(), size()));
  return 0.5 * (inv + inv.transpose());
}

ObservationSet::ObservationSet(Matrix x, std::vector<double> timestamps)
    : x_(std::move(x)), timestamps_(std::move(timestamps)) {
  if (x_.cols() != static_cast<Index>(timestamps_.size())) {
    throw ParameterError("observation count and timestamp count differ");
  }
  if (x_.cols() == 0 || x_.rows() == 0) throw ParameterError("observation set is empty");
  if (!x_.allFinite()) throw ParameterError("observations must be finite");
  for (std::size_t r = 0; r < timestamps_.size(); ++r) {
    if (!std::isfinite(timestamps_[r])) throw ParameterError("timestamps must be finite");
    if (r > 0 && timestamps_[r] < timestamps_[r - 1]) {
      throw ParameterError("timestamps must be nondecreasing");
    }
  }
}

std::optional<Matrix> spd_inverse(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) return std::nullopt;
  Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  return Matrix(0.5 * (inv + inv.transpose()));
}

Graph generate_er_graph(Index n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability must lie in [0, 1]");
  Graph g(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (unif(rng) < p) g.add_edge(i, j, 1.0);
    }
  }
  return g;
}

PrecisionMatrix make_precision(const Graph& g, double eps_margin) {
  if (!(eps_margin > 0.0)) throw ParameterError("eps_margin must be positive");
  const Matrix a = g.adjacency();
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
  const double eps = std::max(0.0, -lambda_min) + eps_margin;
  return PrecisionMatrix(a + eps * Matrix::Identity(a.rows(), a.cols()));
}

std::vector<double> equally_spaced(double lo, double hi, Index count) {
  if (count < 1) throw ParameterError("need at least one timestamp");
  if (!(hi >= lo)) throw ParameterError("interval upper bound below lower bound");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (Index r = 0; r < count; ++r) {
    t[static_cast<std::size_t>(r)] =
        count == 1 ? lo : lo + (hi - lo) * static_cast<double>(r) / static_cast<double>(count - 1);
  }
  return t;
}

ObservationSet sample_observations(const PrecisionMatrix& theta, const MeanModel& mean,
                                   const Vector& phi_true,
                                   std::span<const double> timestamps, Rng& rng) {
  const Index n = theta.size();
  if (mean.dim_nodes() != n) throw ParameterError("mean model and precision disagree on N");
  const auto r_count = static_cast<Index>(timestamps.size());

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, r_count);
  for (Index r = 0; r < r_count; ++r) {
    for (Index i = 0; i < n; ++i) z(i, r) = normal(rng);
  }
  // L^T v = z gives Cov(v) = (L L^T)^{-1}.
  Matrix noise = theta.cholesky().matrixU().solve(z);
  Matrix x = mean_matrix(mean, phi_true, timestamps) + noise;
  return ObservationSet(std::move(x), {timestamps.begin(), timestamps.end()});
}

Matrix centered_covariance(const ObservationSet& obs, const Matrix& means) {
  if (means.rows() != obs.x().rows() || means.cols() != obs.x().cols()) {
    throw ParameterError("mean matrix shape differs from observations");
  }
  const Matrix resid = obs.x() - means;
  Matrix s = (resid * resid.transpose()) / static_cast<double>(obs.num_samples());
  return 0.5 * (s + s.transpose());
}

}  // namespace glatais
