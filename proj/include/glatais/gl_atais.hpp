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
#include <optional>
#include <vector>

#include "glatais/atais.hpp"
#include "glatais/common.hpp"
#include "glatais/ggm_core.hpp"
#include "glatais/glasso.hpp"
#include "glatais/mean_model.hpp"

namespace glatais {

/// Proposal jitter delta_k added to the adapted covariance.
struct DeltaSchedule {
  double delta0 = 1e-3;
  bool decay = false;  // delta_k = delta0 / k when set

  double at(int k) const { return decay ? delta0 / static_cast<double>(k) : delta0; }
};

struct GlAtaisConfig {
  int iterations = 30;         // K
  int warmup_iterations = 5;   // K0; iterations 1..K0 select the MAP particle under Theta = I
  Index particles = 3000;      // P
  double lambda = 0.1;
  DeltaSchedule delta;
  PriorSpec prior;
  PosteriorScaling scaling = PosteriorScaling::kFull;
  /// Defaults to N(0, 4 I_M).
  std::optional<ProposalState> init_proposal;
  GlassoOptions glasso;  // its lambda is overridden by `lambda` above
  /// Keep every particle matrix in the trace (memory heavy; for diagnostics).
  bool keep_particles = false;

  void validate() const;
  ProposalState initial_proposal(Index dim_params) const;
};

struct IterationRecord {
  int k = 0;
  bool warmup = false;
  Index selected = 0;                    // index of the MAP particle
  Vector phi_candidate;                  // phi-hat^(k)
  Matrix theta_candidate;                // Step-2 precision for phi-hat^(k)
  double candidate_log_posterior = 0.0;  // log pi(phi-hat^(k) | X, theta_candidate)
  bool accepted = false;
  Vector phi_map;                        // record after the acceptance test
  Matrix theta_map;
  double best_log_posterior = 0.0;
  double ess = 0.0;
  Vector proposal_mu;                    // proposal for the next iteration
  Matrix proposal_sigma;
  Matrix particles;                      // only with keep_particles
};

struct InitialRecord {
  Vector phi;
  PrecisionMatrix theta;
  double value;
};

struct RunTrace {
  std::optional<InitialRecord> initial;
  std::vector<IterationRecord> iterations;
};

struct RunResult {
  PrecisionMatrix theta;
  Vector phi;
  RunTrace trace;
};

/// Failure inside the alternating loop. Carries the 1-based iteration index
/// and the trace accumulated before the failure.
class RunError : public Error {
 public:
  RunError(const std::string& what, int iteration, RunTrace trace)
      : Error(what), iteration_(iteration), trace_(std::move(trace)) {}

  int iteration() const { return iteration_; }
  const RunTrace& trace() const { return trace_; }

 private:
  int iteration_;
  RunTrace trace_;
};

/// Maps a centered covariance to a precision estimate.
using PrecisionStep = std::function<PrecisionMatrix(const Matrix& covariance)>;

/// 1/2 sum_r |x_r - f_r(phi)|^2 - log g(phi); minimized during warm-up.
double warmup_objective(const Vector& phi, const ObservationSet& obs, const MeanModel& model,
                        const PriorSpec& prior);

/// Iteration-0 state for the acceptance test: the initial proposal mean with
/// Theta = I and its log-posterior.
InitialRecord initial_record(const ObservationSet& obs, const MeanModel& model,
                             const GlAtaisConfig& cfg);

/// Alternating mean / precision estimation.
///
/// Each iteration k = 1..K:
///   1. draw P particles from the proposal and pick the one maximizing
///      log pi(phi | X, Theta_k), Theta_k = I during warm-up (k <= K0) and the
///      current record otherwise;
///   2. center X with the chosen mean, form the covariance and estimate a
///      precision with the graphical lasso;
///   3. replace the record if the candidate's log-posterior is strictly
///      larger, weight the particles by pi(. | X, Theta_k) / q and adapt the
///      proposal around the record.
RunResult run_gl_atais(const ObservationSet& obs, const MeanModel& model,
                       const GlAtaisConfig& cfg, Rng& rng);

/// Same loop with an arbitrary Step-2 estimator.
RunResult run_alternating(const ObservationSet& obs, const MeanModel& model,
                          const GlAtaisConfig& cfg, const PrecisionStep& step, Rng& rng);

}  // namespace glatais
