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

#include "glatais/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "glatais/gl_atais.hpp"
#include "glatais/glasso.hpp"

namespace glatais {

namespace {

using nlohmann::json;

constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kPhiStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kGlAtaisStream = 10;
constexpr std::uint64_t kAtaisInverseStream = 11;

constexpr Method kAllMethods[] = {Method::kStandardGl, Method::kOracleGl, Method::kGlAtais,
                                  Method::kAtaisInverse};

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError("bad number in CSV: '" + std::string(s) + "'");
  }
  return v;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

Index grid_value(const ResultRow& row, SweepMode mode) {
  return mode == SweepMode::kObservations ? row.R : row.P;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_pair(const json& j, const char* key, std::pair<double, double>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(std::string(key) + " must be a two-element array");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kStandardGl: return "standard-gl";
    case Method::kOracleGl: return "oracle-gl";
    case Method::kGlAtais: return "gl-atais";
    case Method::kAtaisInverse: return "atais-inv";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view mode_name(SweepMode m) {
  return m == SweepMode::kObservations ? "obs-sweep" : "particle-sweep";
}

SweepMode parse_mode(std::string_view name) {
  if (name == "obs-sweep") return SweepMode::kObservations;
  if (name == "particle-sweep") return SweepMode::kParticles;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (n != BenchmarkMean::kNodes) fail("n must be 10, the node count of the benchmark mean");
  if (!(p_edge >= 0.0 && p_edge <= 1.0)) fail("p_edge must lie in [0, 1]");
  if (R_grid.empty() || P_grid.empty()) fail("grids must be nonempty");
  for (Index r : R_grid) if (r < 2) fail("R_grid entries must be >= 2");
  for (Index p : P_grid) if (p < 1) fail("P_grid entries must be >= 1");
  if (reps < 1) fail("reps must be >= 1");
  if (K < 1) fail("K must be >= 1");
  if (K0 < 0 || K0 >= K) fail("K0 must satisfy 0 <= K0 < K");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(phi_range.first <= phi_range.second)) fail("phi_range must be [lo, hi] with lo <= hi");
  if (!(tau_interval.first <= tau_interval.second) || tau_interval.first < 0.0) {
    fail("tau_interval must be [lo, hi] with 0 <= lo <= hi");
  }
  if (methods.empty()) fail("methods must be nonempty");
  if (P_fixed < 1) fail("P_fixed must be >= 1");
  if (R_fixed < 2) fail("R_fixed must be >= 2");
  if (!(eps_margin > 0.0)) fail("eps_margin must be > 0");
  if (!(delta > 0.0)) fail("delta must be > 0");
  if (!(glasso_tol > 0.0)) fail("glasso_tol must be > 0");
  if (glasso_max_iter < 1) fail("glasso_max_iter must be >= 1");
  if (jobs < 1) fail("jobs must be >= 1");
  if (prior.kind == PriorKind::kIsotropicGaussian && !(prior.sigma > 0.0)) {
    fail("prior sigma must be > 0");
  }
  if (!(threshold.value > 0.0)) fail("threshold value must be > 0");
}

ExperimentConfig parse_config(std::string_view json_text) {
  static const char* const kKnown[] = {
      "n", "p_edge", "R_grid", "P_grid", "reps", "K", "K0", "lambda", "phi_range",
      "tau_interval", "seed", "methods", "P_fixed", "R_fixed", "eps_margin", "delta",
      "delta_decay", "scaling", "prior", "threshold", "glasso_tol", "glasso_max_iter",
      "record_wall_time", "jobs"};
  ExperimentConfig cfg;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& item : j.items()) {
      if (std::none_of(std::begin(kKnown), std::end(kKnown),
                       [&](const char* k) { return item.key() == k; })) {
        throw ConfigError("unknown config key '" + item.key() + "'");
      }
    }
    read_field(j, "n", cfg.n);
    read_field(j, "p_edge", cfg.p_edge);
    read_field(j, "R_grid", cfg.R_grid);
    read_field(j, "P_grid", cfg.P_grid);
    read_field(j, "reps", cfg.reps);
    read_field(j, "K", cfg.K);
    read_field(j, "K0", cfg.K0);
    read_field(j, "lambda", cfg.lambda);
    read_pair(j, "phi_range", cfg.phi_range);
    read_pair(j, "tau_interval", cfg.tau_interval);
    read_field(j, "seed", cfg.seed);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    read_field(j, "P_fixed", cfg.P_fixed);
    read_field(j, "R_fixed", cfg.R_fixed);
    read_field(j, "eps_margin", cfg.eps_margin);
    read_field(j, "delta", cfg.delta);
    read_field(j, "delta_decay", cfg.delta_decay);
    if (j.contains("scaling")) {
      const auto s = j.at("scaling").get<std::string>();
      if (s == "paper") cfg.scaling = PosteriorScaling::kPaper;
      else if (s == "full") cfg.scaling = PosteriorScaling::kFull;
      else throw ConfigError("scaling must be \"paper\" or \"full\"");
    }
    if (j.contains("prior")) {
      const json& p = j.at("prior");
      const auto kind = p.value("kind", std::string("improper"));
      if (kind == "improper") cfg.prior = PriorSpec::improper();
      else if (kind == "gaussian") cfg.prior = PriorSpec::gaussian(p.value("sigma", 1.0));
      else throw ConfigError("prior kind must be \"improper\" or \"gaussian\"");
    }
    if (j.contains("threshold")) {
      const json& t = j.at("threshold");
      const auto kind = t.value("kind", std::string("absolute"));
      if (kind == "absolute") cfg.threshold.kind = ThresholdKind::kAbsolute;
      else if (kind == "relative") cfg.threshold.kind = ThresholdKind::kRelativeToMax;
      else throw ConfigError("threshold kind must be \"absolute\" or \"relative\"");
      cfg.threshold.value = t.value("value", cfg.threshold.value);
    }
    read_field(j, "glasso_tol", cfg.glasso_tol);
    read_field(j, "glasso_max_iter", cfg.glasso_max_iter);
    read_field(j, "record_wall_time", cfg.record_wall_time);
    read_field(j, "jobs", cfg.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["p_edge"] = cfg.p_edge;
  j["R_grid"] = cfg.R_grid;
  j["P_grid"] = cfg.P_grid;
  j["reps"] = cfg.reps;
  j["K"] = cfg.K;
  j["K0"] = cfg.K0;
  j["lambda"] = cfg.lambda;
  j["phi_range"] = {cfg.phi_range.first, cfg.phi_range.second};
  j["tau_interval"] = {cfg.tau_interval.first, cfg.tau_interval.second};
  j["seed"] = cfg.seed;
  j["methods"] = json::array();
  for (Method m : cfg.methods) j["methods"].push_back(std::string(method_name(m)));
  j["P_fixed"] = cfg.P_fixed;
  j["R_fixed"] = cfg.R_fixed;
  j["eps_margin"] = cfg.eps_margin;
  j["delta"] = cfg.delta;
  j["delta_decay"] = cfg.delta_decay;
  j["scaling"] = cfg.scaling == PosteriorScaling::kPaper ? "paper" : "full";
  if (cfg.prior.kind == PriorKind::kImproperUniform) {
    j["prior"] = {{"kind", "improper"}};
  } else {
    j["prior"] = {{"kind", "gaussian"}, {"sigma", cfg.prior.sigma}};
  }
  j["threshold"] = {
      {"kind", cfg.threshold.kind == ThresholdKind::kAbsolute ? "absolute" : "relative"},
      {"value", cfg.threshold.value}};
  j["glasso_tol"] = cfg.glasso_tol;
  j["glasso_max_iter"] = cfg.glasso_max_iter;
  j["record_wall_time"] = cfg.record_wall_time;
  j["jobs"] = cfg.jobs;
  return j.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

bool ResultRow::same_columns(const ResultRow& o) const {
  return method == o.method && R == o.R && P == o.P && rep == o.rep && seed == o.seed &&
         f_score == o.f_score && wall_time_ms == o.wall_time_ms &&
         log_posterior == o.log_posterior && error == o.error;
}

std::uint64_t repetition_seed(std::uint64_t master_seed, int rep) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(rep));
}

std::uint64_t data_digest(const ObservationSet& obs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const double* data, std::size_t count) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < count * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(obs.x().data(), static_cast<std::size_t>(obs.x().size()));
  feed(obs.timestamps().data(), obs.timestamps().size());
  return h;
}

RepetitionData make_repetition_data(const ExperimentConfig& cfg, int rep, Index R) {
  const std::uint64_t seed = repetition_seed(cfg.seed, rep);
  Rng graph_rng(derive_seed(seed, kGraphStream));
  Graph graph = generate_er_graph(cfg.n, cfg.p_edge, graph_rng);
  PrecisionMatrix theta = make_precision(graph, cfg.eps_margin);

  const BenchmarkMean model;
  Rng phi_rng(derive_seed(seed, kPhiStream));
  std::uniform_real_distribution<double> unif(cfg.phi_range.first, cfg.phi_range.second);
  Vector phi_true(model.dim_params());
  do {
    for (Index i = 0; i < phi_true.size(); ++i) phi_true(i) = unif(phi_rng);
  } while (phi_true(2) == -1.0);

  Rng noise_rng(derive_seed(seed, kNoiseStream));
  const std::vector<double> taus = equally_spaced(cfg.tau_interval.first, cfg.tau_interval.second, R);
  ObservationSet obs = sample_observations(theta, model, phi_true, taus, noise_rng);
  const std::uint64_t digest = data_digest(obs);
  return RepetitionData{seed, std::move(graph), std::move(theta), std::move(phi_true),
                        std::move(obs), digest};
}

GlAtaisConfig gl_atais_config(const ExperimentConfig& cfg, Index P) {
  GlAtaisConfig g;
  g.iterations = cfg.K;
  g.warmup_iterations = cfg.K0;
  g.particles = P;
  g.lambda = cfg.lambda;
  g.delta = DeltaSchedule{cfg.delta, cfg.delta_decay};
  g.prior = cfg.prior;
  g.scaling = cfg.scaling;
  g.glasso = GlassoOptions{cfg.lambda, cfg.glasso_max_iter, cfg.glasso_tol};
  return g;
}

std::vector<ResultRow> run_repetition(const ExperimentConfig& cfg, int rep, Index R, Index P,
                                      const TraceSink& sink) {
  cfg.validate();
  if (rep < 0 || rep >= cfg.reps) throw ParameterError("repetition index out of range");
  const RepetitionData data = make_repetition_data(cfg, rep, R);
  const EdgeSet truth = EdgeSet::from_graph(data.graph);
  const BenchmarkMean model;
  const GlassoOptions gl_opts{cfg.lambda, cfg.glasso_max_iter, cfg.glasso_tol};
  const GlAtaisConfig is_cfg = gl_atais_config(cfg, P);

  std::vector<ResultRow> rows;
  for (Method method : cfg.methods) {
    ResultRow row;
    row.method = method;
    row.R = R;
    row.P = P;
    row.rep = rep;
    row.seed = data.seed;
    row.data_digest = data.digest;
    const auto start = std::chrono::steady_clock::now();
    try {
      Matrix estimate;
      std::optional<RunTrace> trace;
      switch (method) {
        case Method::kStandardGl:
          estimate = baseline_standard_gl(data.obs, gl_opts).matrix();
          break;
        case Method::kOracleGl:
          estimate = baseline_oracle_gl(data.obs, model, data.phi_true, gl_opts).matrix();
          break;
        case Method::kGlAtais: {
          Rng rng(derive_seed(data.seed, kGlAtaisStream));
          RunResult res = run_gl_atais(data.obs, model, is_cfg, rng);
          row.log_posterior = res.trace.iterations.back().best_log_posterior;
          estimate = res.theta.matrix();
          trace = std::move(res.trace);
          break;
        }
        case Method::kAtaisInverse: {
          Rng rng(derive_seed(data.seed, kAtaisInverseStream));
          RunResult res = run_atais_inverse(data.obs, model, is_cfg, std::nullopt, rng);
          row.log_posterior = res.trace.iterations.back().best_log_posterior;
          estimate = res.theta.matrix();
          trace = std::move(res.trace);
          break;
        }
      }
      row.f_score = f_score(support_from_precision(estimate, cfg.threshold), truth);
      if (sink && trace) sink(row, *trace);
    } catch (const Error& e) {
      row.error = csv_safe(e.what());
      row.log_posterior.reset();
    }
    if (cfg.record_wall_time) {
      row.wall_time_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Aggregate> summarize(const std::vector<ResultRow>& rows, SweepMode mode) {
  std::map<std::pair<Method, Index>, std::vector<const ResultRow*>> cells;
  for (const ResultRow& row : rows) cells[{row.method, grid_value(row, mode)}].push_back(&row);

  std::vector<Aggregate> out;
  for (auto& [key, members] : cells) {
    std::sort(members.begin(), members.end(),
              [](const ResultRow* a, const ResultRow* b) { return a->rep < b->rep; });
    Aggregate agg{key.first, key.second};
    double sum = 0.0;
    for (const ResultRow* r : members) {
      if (!r->f_score) {
        ++agg.errors;
        continue;
      }
      const double v = *r->f_score;
      agg.min = agg.count == 0 ? v : std::min(agg.min, v);
      agg.max = agg.count == 0 ? v : std::max(agg.max, v);
      sum += v;
      ++agg.count;
    }
    if (agg.count > 0) {
      agg.mean = sum / agg.count;
      if (agg.count > 1) {
        double ss = 0.0;
        for (const ResultRow* r : members) {
          if (r->f_score) ss += (*r->f_score - agg.mean) * (*r->f_score - agg.mean);
        }
        agg.std_error = std::sqrt(ss / (agg.count - 1)) / std::sqrt(static_cast<double>(agg.count));
      }
      agg.mean = std::clamp(agg.mean, agg.min, agg.max);
    }
    out.push_back(agg);
  }
  return out;
}

SweepTable run_sweep(const ExperimentConfig& cfg, SweepMode mode) {
  cfg.validate();
  const std::vector<Index>& grid = mode == SweepMode::kObservations ? cfg.R_grid : cfg.P_grid;
  struct Task {
    Index R;
    Index P;
    int rep;
  };
  std::vector<Task> tasks;
  for (Index g : grid) {
    for (int rep = 0; rep < cfg.reps; ++rep) {
      tasks.push_back(mode == SweepMode::kObservations ? Task{g, cfg.P_fixed, rep}
                                                       : Task{cfg.R_fixed, g, rep});
    }
  }

  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = run_repetition(cfg, tasks[i].rep, tasks[i].R, tasks[i].P);
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepTable table;
  table.mode = mode;
  for (auto& chunk : results) {
    for (auto& row : chunk) table.rows.push_back(std::move(row));
  }
  table.aggregates = summarize(table.rows, mode);
  return table;
}

namespace {

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string results_csv(const SweepTable& table) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultRow& r : table.rows) {
    out += method_name(r.method);
    out += ',' + std::to_string(r.R) + ',' + std::to_string(r.P) + ',' + std::to_string(r.rep) +
           ',' + std::to_string(r.seed) + ',' + optional_cell(r.f_score) + ',' +
           optional_cell(r.wall_time_ms) + ',' + optional_cell(r.log_posterior) + ',' +
           csv_safe(r.error) + '\n';
  }
  return out;
}

std::string summary_csv(const SweepTable& table) {
  std::string out = "method,";
  out += table.mode == SweepMode::kObservations ? "R" : "P";
  out += ",mean,stderr,count,errors\n";
  for (const Aggregate& a : table.aggregates) {
    out += std::string(method_name(a.method)) + ',' + std::to_string(a.grid_value) + ',' +
           format_double(a.mean) + ',' + format_double(a.std_error) + ',' +
           std::to_string(a.count) + ',' + std::to_string(a.errors) + '\n';
  }
  return out;
}

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string svg_chart(const SweepTable& table) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 150, kTop = 30, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  static const char* const kColors[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e"};

  std::vector<Index> grid;
  for (const Aggregate& a : table.aggregates) grid.push_back(a.grid_value);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Grid points are placed at equal spacing (the particle grid is geometric).
  auto x_of = [&](Index g) {
    const auto pos = std::lower_bound(grid.begin(), grid.end(), g) - grid.begin();
    return grid.size() == 1 ? kLeft + plot_w / 2
                            : kLeft + plot_w * static_cast<double>(pos) /
                                          static_cast<double>(grid.size() - 1);
  };
  auto y_of = [&](double f) { return kTop + plot_h * (1.0 - std::clamp(f, 0.0, 1.0)); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n"
      << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double f = t / 5.0;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << svg_number(y_of(f) + 4)
        << "\" text-anchor=\"end\">" << svg_number(f) << "</text>\n";
  }
  for (Index g : grid) {
    svg << "<text x=\"" << svg_number(x_of(g)) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << g << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\">"
      << (table.mode == SweepMode::kObservations ? "Number of observations R"
                                                 : "Number of particles P")
      << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">Mean F-score</text>\n</g>\n";

  int series = 0;
  for (Method m : kAllMethods) {
    std::vector<const Aggregate*> pts;
    for (const Aggregate& a : table.aggregates) {
      if (a.method == m && a.count > 0) pts.push_back(&a);
    }
    if (pts.empty()) continue;
    const char* color = kColors[static_cast<int>(m)];
    svg << "<g class=\"series\" data-method=\"" << method_name(m) << "\" stroke=\"" << color
        << "\" fill=\"none\">\n<polyline stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      svg << (i ? " " : "") << svg_number(x_of(pts[i]->grid_value)) << ','
          << svg_number(y_of(pts[i]->mean));
    }
    svg << "\"/>\n";
    for (const Aggregate* a : pts) {
      const double x = x_of(a->grid_value);
      svg << "<line x1=\"" << svg_number(x) << "\" y1=\"" << svg_number(y_of(a->mean - a->std_error))
          << "\" x2=\"" << svg_number(x) << "\" y2=\"" << svg_number(y_of(a->mean + a->std_error))
          << "\"/>\n";
    }
    svg << "</g>\n";
    const double ly = kTop + 10 + 20 * series;
    svg << "<line x1=\"" << kLeft + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + plot_w + 45 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << method_name(m) << "</text>\n";
    ++series;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::optional<double> optional_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s);
}

}  // namespace

std::string emit_results(const SweepTable& table, OutputFormat format) {
  if (table.rows.empty()) throw ParameterError("cannot emit an empty result table");
  switch (format) {
    case OutputFormat::kResultsCsv: return results_csv(table);
    case OutputFormat::kSummaryCsv: return summary_csv(table);
    case OutputFormat::kSvgChart: return svg_chart(table);
  }
  return {};
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  bool header = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (header) {
      if (line != kResultsHeader) throw ParameterError("unexpected results header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 9) throw ParameterError("results row must have 9 columns");
    ResultRow r;
    r.method = parse_method(cells[0]);
    r.R = parse_number<Index>(cells[1]);
    r.P = parse_number<Index>(cells[2]);
    r.rep = parse_number<int>(cells[3]);
    r.seed = parse_number<std::uint64_t>(cells[4]);
    r.f_score = optional_number(cells[5]);
    r.wall_time_ms = optional_number(cells[6]);
    r.log_posterior = optional_number(cells[7]);
    r.error = std::string(cells[8]);
    rows.push_back(std::move(r));
  }
  if (header) throw ParameterError("missing results header");
  return rows;
}

}  // namespace glatais
