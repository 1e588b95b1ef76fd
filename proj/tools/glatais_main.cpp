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

// Command-line front end for the synthetic graph-recovery experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "glatais/evaluation.hpp"
#include "glatais/gl_atais.hpp"
#include "glatais/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw glatais::Error("cannot write " + path.string());
  out << bytes;
  if (!out) throw glatais::Error("failed writing " + path.string());
}

int run_command(const std::string& config_path, const std::string& mode_text,
                const std::string& out_dir, int jobs) {
  glatais::ExperimentConfig cfg;
  glatais::SweepMode mode;
  try {
    cfg = glatais::load_config(config_path);
    mode = glatais::parse_mode(mode_text);
    if (jobs > 0) cfg.jobs = jobs;
  } catch (const glatais::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(out_dir);
    const glatais::SweepTable table = glatais::run_sweep(cfg, mode);
    const std::filesystem::path dir(out_dir);
    write_file(dir / "results.csv", glatais::emit_results(table, glatais::OutputFormat::kResultsCsv));
    write_file(dir / "summary.csv", glatais::emit_results(table, glatais::OutputFormat::kSummaryCsv));
    write_file(dir / "figure.svg", glatais::emit_results(table, glatais::OutputFormat::kSvgChart));
    for (const glatais::Aggregate& a : table.aggregates) {
      std::printf("%-12s %s=%-6lld mean F=%.4f  se=%.4f  n=%d  errors=%d\n",
                  std::string(glatais::method_name(a.method)).c_str(),
                  mode == glatais::SweepMode::kObservations ? "R" : "P",
                  static_cast<long long>(a.grid_value), a.mean, a.std_error, a.count, a.errors);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int demo_command(const std::string& config_path, int rep, long long R, long long P) {
  glatais::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = glatais::load_config(config_path);
    cfg.reps = std::max(cfg.reps, rep + 1);
    cfg.validate();
  } catch (const glatais::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (P <= 0) P = cfg.P_fixed;
  try {
    const glatais::RepetitionData data = glatais::make_repetition_data(cfg, rep, R);
    const glatais::BenchmarkMean model;
    std::printf("repetition %d  seed %llu  N=%lld  R=%lld  P=%lld  edges=%zu\n", rep,
                static_cast<unsigned long long>(data.seed), static_cast<long long>(cfg.n), R, P,
                data.graph.num_edges());
    std::printf("phi_true = [%.4f %.4f %.4f %.4f]\n", data.phi_true(0), data.phi_true(1),
                data.phi_true(2), data.phi_true(3));

    glatais::Rng rng(glatais::derive_seed(data.seed, 10));
    const glatais::RunResult res =
        glatais::run_gl_atais(data.obs, model, glatais::gl_atais_config(cfg, P), rng);
    std::printf("initial record: log-posterior %.6g\n", res.trace.initial->value);
    std::printf("%4s %6s %8s %16s %10s  %s\n", "k", "warmup", "accepted", "best log-post", "ESS",
                "phi_MAP");
    for (const glatais::IterationRecord& it : res.trace.iterations) {
      std::printf("%4d %6s %8s %16.6f %10.2f  [%.4f %.4f %.4f %.4f]\n", it.k,
                  it.warmup ? "yes" : "no", it.accepted ? "yes" : "no", it.best_log_posterior,
                  it.ess, it.phi_map(0), it.phi_map(1), it.phi_map(2), it.phi_map(3));
    }
    for (const glatais::ResultRow& row : glatais::run_repetition(cfg, rep, R, P)) {
      if (row.f_score) {
        std::printf("%-12s F-score %.4f\n", std::string(glatais::method_name(row.method)).c_str(),
                    *row.f_score);
      } else {
        std::printf("%-12s failed: %s\n", std::string(glatais::method_name(row.method)).c_str(),
                    row.error.c_str());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int validate_command(const std::string& config_path) {
  try {
    const glatais::ExperimentConfig cfg = glatais::load_config(config_path);
    std::cout << glatais::config_to_json(cfg) << '\n';
  } catch (const glatais::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph learning with time-varying means: GL-ATAIS experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode;
  std::string out_dir;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "Run an observation or particle sweep");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--mode", mode, "obs-sweep or particle-sweep")
      ->required()
      ->check(CLI::IsMember({"obs-sweep", "particle-sweep"}));
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--jobs", jobs, "Worker threads (overrides the config)");

  std::string demo_config;
  int demo_rep = 0;
  long long demo_r = 100;
  long long demo_p = 0;
  auto* demo = app.add_subcommand("demo", "One repetition with a verbose GL-ATAIS trace");
  demo->add_option("--config", demo_config, "Experiment config (JSON)");
  demo->add_option("--rep", demo_rep, "Repetition index")->check(CLI::NonNegativeNumber);
  demo->add_option("--R", demo_r, "Number of observations")->check(CLI::Range(2LL, 1000000LL));
  demo->add_option("--P", demo_p, "Number of particles (default: P_fixed)");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate-config", "Check a config file and print it normalized");
  validate->add_option("--config", validate_config, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return run_command(config_path, mode, out_dir, jobs);
  if (*demo) return demo_command(demo_config, demo_rep, demo_r, demo_p);
  if (*validate) return validate_command(validate_config);
  return kExitConfig;
}
