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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glatais/atais.hpp"
#include "glatais/common.hpp"
#include "glatais/evaluation.hpp"
#include "glatais/ggm_core.hpp"
#include "glatais/gl_atais.hpp"
#include "glatais/mean_model.hpp"

namespace glatais {

enum class Method { kStandardGl, kOracleGl, kGlAtais, kAtaisInverse };

/// "standard-gl", "oracle-gl", "gl-atais", "atais-inv".
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// kObservations iterates R_grid at P_fixed; kParticles iterates P_grid at R_fixed.
enum class SweepMode { kObservations, kParticles };

std::string_view mode_name(SweepMode m);  // "obs-sweep" / "particle-sweep"
SweepMode parse_mode(std::string_view name);

/// Thrown for malformed or invalid experiment configurations.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Synthetic graph-recovery experiment. JSON keys match the member names.
struct ExperimentConfig {
  Index n = 10;
  double p_edge = 0.1;
  std::vector<Index> R_grid{50, 100, 150, 200};
  std::vector<Index> P_grid{30, 300, 3000, 30000};
  int reps = 20;
  int K = 30;
  int K0 = 5;
  double lambda = 0.1;
  std::pair<double, double> phi_range{-2.0, 2.0};
  std::pair<double, double> tau_interval{0.0, 4.0};
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::kStandardGl, Method::kOracleGl, Method::kGlAtais,
                              Method::kAtaisInverse};

  Index P_fixed = 3000;  // particles in the observation sweep
  Index R_fixed = 100;   // observations in the particle sweep
  double eps_margin = 0.1;
  double delta = 1e-3;
  bool delta_decay = false;
  PosteriorScaling scaling = PosteriorScaling::kFull;
  PriorSpec prior;
  ThresholdSpec threshold;
  double glasso_tol = 1e-6;
  int glasso_max_iter = 500;
  bool record_wall_time = false;  // off keeps results.csv reproducible
  int jobs = 1;

  void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  Method method = Method::kOracleGl;
  Index R = 0;
  Index P = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> f_score;
  std::optional<double> wall_time_ms;
  std::optional<double> log_posterior;  // IS methods only
  std::string error;
  std::uint64_t data_digest = 0;  // not serialized

  /// Equality over the serialized columns.
  bool same_columns(const ResultRow& other) const;
};

/// One synthetic data set.
struct RepetitionData {
  std::uint64_t seed;
  Graph graph;
  PrecisionMatrix theta;
  Vector phi_true;
  ObservationSet obs;
  std::uint64_t digest;
};

/// Seed of repetition `rep`, independent of every other repetition.
std::uint64_t repetition_seed(std::uint64_t master_seed, int rep);

/// Graph, precision and phi_true depend only on (seed, rep); the noise
/// additionally on R.
RepetitionData make_repetition_data(const ExperimentConfig& cfg, int rep, Index R);

/// FNV-1a over the observation matrix and timestamps.
std::uint64_t data_digest(const ObservationSet& obs);

GlAtaisConfig gl_atais_config(const ExperimentConfig& cfg, Index P);

/// Receives the trace of every successful importance-sampling run.
using TraceSink = std::function<void(const ResultRow&, const RunTrace&)>;

/// Every configured method on the same data set, one row each. Method
/// failures are recorded in the row instead of propagating.
std::vector<ResultRow> run_repetition(const ExperimentConfig& cfg, int rep, Index R, Index P,
                                      const TraceSink& sink = {});

struct Aggregate {
  Method method;
  Index grid_value;
  double mean = 0.0;
  double std_error = 0.0;
  int count = 0;   // rows with a score
  int errors = 0;  // rows with an error
  double min = 0.0;
  double max = 0.0;
};

struct SweepTable {
  SweepMode mode = SweepMode::kObservations;
  std::vector<ResultRow> rows;
  std::vector<Aggregate> aggregates;
};

/// Mean and standard error of the F-score per (method, grid value). Output is
/// sorted by method then grid value.
std::vector<Aggregate> summarize(const std::vector<ResultRow>& rows, SweepMode mode);

SweepTable run_sweep(const ExperimentConfig& cfg, SweepMode mode);

enum class OutputFormat { kResultsCsv, kSummaryCsv, kSvgChart };

inline constexpr std::string_view kResultsHeader =
    "method,R,P,rep,seed,f_score,wall_time_ms,log_posterior,error";

/// Throws ParameterError on an empty table.
std::string emit_results(const SweepTable& table, OutputFormat format);

std::vector<ResultRow> parse_results_csv(std::string_view text);

}  // namespace glatais
