// Command-line front end: simulate | eval | curves | crossover | fit | report.
// Every command resolves its parameters into a manifest, writes artifacts
// atomically into a run directory named by the manifest digest, and is
// byte-for-byte reproducible from that manifest.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "veriscale/compute.hpp"
#include "veriscale/curves.hpp"
#include "veriscale/dataset.hpp"
#include "veriscale/estimators.hpp"
#include "veriscale/export.hpp"
#include "veriscale/manifest.hpp"
#include "veriscale/scaling.hpp"
#include "veriscale/synth.hpp"
#include "veriscale/version.hpp"

namespace fs = std::filesystem;
using namespace veriscale;

namespace {

// Shortest round-trip decimal rendering, shared with the JSON artifacts.
std::string num_str(double value) { return nlohmann::json(value).dump(); }

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

struct AnalysisOpts {
  std::string data_path;
  double lambda = 1.0;
  std::optional<double> params_p;
  std::optional<double> tokens_per_solution;
  std::uint64_t seed = 0;
  int trials = 1000;
  std::string aggregation = "mean_score";
  std::string mode = "automatic";
  bool per_solution_draws = false;
  std::vector<int> s_grid;
  std::vector<int> v_grid;
  bool extrapolate_flat = false;
  bool ragged = false;
  int smooth_window = 1;
  int n_budgets = 32;
  std::string out_root = "runs";
};

void add_common_flags(CLI::App* cmd, AnalysisOpts& o, bool with_smooth) {
  cmd->add_option("--data", o.data_path, "record file (one problem per line)")->required();
  cmd->add_option("--lambda", o.lambda, "verification/solution token cost ratio")
      ->capture_default_str();
  cmd->add_option("--params", o.params_p, "model parameter count (absolute-FLOPs conversion)");
  cmd->add_option("--tokens-per-solution", o.tokens_per_solution,
                  "tokens per solution sample (absolute-FLOPs conversion)");
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Monte Carlo repetitions per problem")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--aggregation", o.aggregation, "verification score aggregation")
      ->check(CLI::IsMember({"mean_score", "count_yes"}))
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "subset sampling strategy")
      ->check(CLI::IsMember({"automatic", "monte_carlo", "exhaustive"}))
      ->capture_default_str();
  cmd->add_flag("--per-solution-draws", o.per_solution_draws,
                "draw an independent verification subset per solution");
  cmd->add_option("--s-grid", o.s_grid, "solution counts (default: powers of two)")
      ->delimiter(',');
  cmd->add_option("--v-grid", o.v_grid, "verification counts (default: powers of two)")
      ->delimiter(',');
  cmd->add_flag("--ragged", o.ragged, "accept non-rectangular record grids");
  if (with_smooth) {
    cmd->add_option("--smooth-window", o.smooth_window, "odd moving-average window (1 = off)")
        ->capture_default_str();
  }
  cmd->add_option("--out", o.out_root, "root directory for run outputs")->capture_default_str();
}

ComputeParams make_params(const AnalysisOpts& o) {
  ComputeParams params;
  params.lambda = o.lambda;
  params.params_p = o.params_p;
  params.tokens_per_solution = o.tokens_per_solution;
  params.validate();
  return params;
}

EstimatorConfig make_cfg(const AnalysisOpts& o) {
  EstimatorConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.aggregation = o.aggregation == "count_yes" ? Aggregation::count_yes
                                                 : Aggregation::mean_score;
  if (o.mode == "monte_carlo") {
    cfg.mode = SamplingMode::monte_carlo;
  } else if (o.mode == "exhaustive") {
    cfg.mode = SamplingMode::exhaustive;
  } else {
    cfg.mode = SamplingMode::automatic;
  }
  cfg.per_solution_draws = o.per_solution_draws;
  cfg.validate();
  return cfg;
}

std::vector<int> resolve_grid(const std::vector<int>& requested, int limit, const char* axis,
                              int minimum) {
  std::vector<int> grid = requested;
  if (grid.empty()) {
    grid = pow2_grid(limit);
    if (grid.empty())
      throw std::domain_error(std::string("dataset offers no usable ") + axis + " values");
    return grid;
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < minimum)
    throw std::domain_error(std::string(axis) + "-grid values must be >= " +
                            std::to_string(minimum));
  if (grid.back() > limit)
    throw std::domain_error(std::string(axis) + "-grid exceeds the data (max " +
                            std::to_string(limit) + ")");
  return grid;
}

void put_common_parameters(RunManifest& manifest, const AnalysisOpts& o,
                           const std::vector<int>& s_grid, const std::vector<int>& v_grid,
                           bool with_smooth) {
  manifest.parameters["data"] = o.data_path;
  manifest.parameters["lambda"] = num_str(o.lambda);
  if (o.params_p) manifest.parameters["params"] = num_str(*o.params_p);
  if (o.tokens_per_solution)
    manifest.parameters["tokens-per-solution"] = num_str(*o.tokens_per_solution);
  manifest.parameters["seed"] = std::to_string(o.seed);
  manifest.parameters["trials"] = std::to_string(o.trials);
  manifest.parameters["aggregation"] = o.aggregation;
  manifest.parameters["mode"] = o.mode;
  if (o.per_solution_draws) manifest.parameters["per-solution-draws"] = "true";
  manifest.parameters["s-grid"] = join_ints(s_grid);
  manifest.parameters["v-grid"] = join_ints(v_grid);
  if (o.ragged) manifest.parameters["ragged"] = "true";
  if (with_smooth) manifest.parameters["smooth-window"] = std::to_string(o.smooth_window);
  manifest.parameters["out"] = o.out_root;
}

fs::path prepare_run_dir(const std::string& out_root, RunManifest& manifest) {
  manifest.tool_version = kVersion;
  manifest.timestamp = utc_timestamp_now();
  const fs::path dir = fs::path(out_root) / (manifest.command + "-" + manifest_digest(manifest));
  fs::create_directories(dir);
  return dir;
}

void finish_run(const fs::path& dir, const RunManifest& manifest) {
  write_file_atomic((dir / "manifest.json").string(), manifest_to_json(manifest));
  std::cout << "run: " << dir.string() << "\n";
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::optional<int> problems;
  std::optional<int> solutions;
  std::optional<int> verifications;
  std::optional<double> difficulty;
  std::optional<double> difficulty_alpha;
  std::optional<double> difficulty_beta;
  std::optional<int> distractors;
  std::optional<double> distractor_decay;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> score_noise;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::string config_file;
  std::string out_root = "runs";
};

void apply_config_line(SynthConfig& config, const std::string& key, const std::string& value) {
  try {
    if (key == "problems") {
      config.n_problems = std::stoi(value);
    } else if (key == "solutions") {
      config.n_solutions = std::stoi(value);
    } else if (key == "verifications") {
      config.n_verifications = std::stoi(value);
    } else if (key == "difficulty") {
      config.difficulty = std::stod(value);
      config.difficulty_beta.reset();
    } else if (key == "difficulty_alpha") {
      config.difficulty_beta = {std::stod(value),
                                config.difficulty_beta ? config.difficulty_beta->second : 1.0};
    } else if (key == "difficulty_beta") {
      config.difficulty_beta = {config.difficulty_beta ? config.difficulty_beta->first : 1.0,
                                std::stod(value)};
    } else if (key == "distractors") {
      config.distractors = std::stoi(value);
    } else if (key == "distractor_decay") {
      config.distractor_decay = std::stod(value);
    } else if (key == "tpr") {
      config.verifier_tpr = std::stod(value);
    } else if (key == "fpr") {
      config.verifier_fpr = std::stod(value);
    } else if (key == "score_noise") {
      config.score_noise = std::stod(value);
    } else if (key == "seed") {
      config.seed = std::stoull(value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const std::logic_error& e) {
    if (std::string(e.what()).rfind("unknown config key", 0) == 0) throw;
    throw std::invalid_argument("bad value for config key '" + key + "': " + value);
  }
}

SynthConfig resolve_simulate_config(const SimulateOpts& o) {
  SynthConfig config;
  if (!o.scenario.empty()) {
    if (o.scenario == "precise_verifier") {
      config = precise_verifier_scenario();
    } else if (o.scenario == "uninformative_verifier") {
      config = uninformative_verifier_scenario();
    } else if (o.scenario == "coverage_limited") {
      config = coverage_limited_scenario();
    } else {
      throw std::invalid_argument("unknown scenario '" + o.scenario + "'");
    }
  }
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw DataError("cannot open config file '" + o.config_file + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto begin = line.find_first_not_of(" \t\r");
      if (begin == std::string::npos) continue;
      const auto end = line.find_last_not_of(" \t\r");
      line = line.substr(begin, end - begin + 1);
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(o.config_file + ":" + std::to_string(line_no) +
                                    ": expected key=value");
      auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
      };
      apply_config_line(config, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
  }
  if (o.difficulty && (o.difficulty_alpha || o.difficulty_beta))
    throw std::invalid_argument("give either --difficulty or the --difficulty-alpha/beta pair");
  if (o.difficulty_alpha.has_value() != o.difficulty_beta.has_value())
    throw std::invalid_argument("--difficulty-alpha and --difficulty-beta must come together");
  if (o.problems) config.n_problems = *o.problems;
  if (o.solutions) config.n_solutions = *o.solutions;
  if (o.verifications) config.n_verifications = *o.verifications;
  if (o.difficulty) {
    config.difficulty = *o.difficulty;
    config.difficulty_beta.reset();
  }
  if (o.difficulty_alpha) config.difficulty_beta = {*o.difficulty_alpha, *o.difficulty_beta};
  if (o.distractors) config.distractors = *o.distractors;
  if (o.distractor_decay) config.distractor_decay = *o.distractor_decay;
  if (o.tpr) config.verifier_tpr = *o.tpr;
  if (o.fpr) config.verifier_fpr = *o.fpr;
  if (o.score_noise) config.score_noise = *o.score_noise;
  if (o.seed) config.seed = *o.seed;
  config.validate();
  return config;
}

int run_simulate(const SimulateOpts& o) {
  const SynthConfig config = resolve_simulate_config(o);
  const Dataset dataset = generate(config);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.parameters["problems"] = std::to_string(config.n_problems);
  manifest.parameters["solutions"] = std::to_string(config.n_solutions);
  manifest.parameters["verifications"] = std::to_string(config.n_verifications);
  if (config.difficulty_beta) {
    manifest.parameters["difficulty-alpha"] = num_str(config.difficulty_beta->first);
    manifest.parameters["difficulty-beta"] = num_str(config.difficulty_beta->second);
  } else {
    manifest.parameters["difficulty"] = num_str(config.difficulty);
  }
  manifest.parameters["distractors"] = std::to_string(config.distractors);
  manifest.parameters["distractor-decay"] = num_str(config.distractor_decay);
  manifest.parameters["tpr"] = num_str(config.verifier_tpr);
  manifest.parameters["fpr"] = num_str(config.verifier_fpr);
  manifest.parameters["score-noise"] = num_str(config.score_noise);
  manifest.parameters["seed"] = std::to_string(config.seed);
  manifest.parameters["out"] = o.out_root;

  const fs::path dir = prepare_run_dir(o.out_root, manifest);
  write_file_atomic((dir / "dataset.jsonl").string(), to_jsonl(dataset));
  finish_run(dir, manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int run_eval(const AnalysisOpts& o) {
  const Dataset dataset = load_jsonl(o.data_path, o.ragged);
  const ComputeParams params = make_params(o);
  const EstimatorConfig cfg = make_cfg(o);
  const auto s_grid = resolve_grid(o.s_grid, dataset.usable_solutions(), "s", 1);
  const auto v_grid = resolve_grid(o.v_grid, dataset.usable_verifications(), "v", 1);

  std::ostringstream csv;
  csv << "s,v,budget,sr\n";
  nlohmann::json cells = nlohmann::json::array();
  auto emit = [&](int s, int v, double sr) {
    const double b = budget(s, v, params);
    char line[128];
    std::snprintf(line, sizeof(line), "%d,%d,%.6f,%.6f\n", s, v, b, sr);
    csv << line;
    cells.push_back({{"s", s}, {"v", v}, {"budget", b}, {"sr", sr}});
  };
  for (int s : s_grid) emit(s, 0, sc_success_rate(dataset, s, cfg));
  for (int v : v_grid) {
    for (int s : s_grid) emit(s, v, genrm_success_rate(dataset, s, v, cfg));
  }

  RunManifest manifest;
  manifest.command = "eval";
  put_common_parameters(manifest, o, s_grid, v_grid, false);
  manifest.input_digests[o.data_path] = file_digest_hex(o.data_path);

  const fs::path dir = prepare_run_dir(o.out_root, manifest);
  write_file_atomic((dir / "eval.csv").string(), csv.str());
  write_file_atomic((dir / "eval.json").string(), cells.dump(2) + "\n");
  finish_run(dir, manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// curves / crossover

struct BuiltCurves {
  Curve sc;
  std::vector<Curve> genrm;
};

BuiltCurves build_all_curves(const Dataset& dataset, const AnalysisOpts& o,
                             const std::vector<int>& s_grid, const std::vector<int>& v_grid) {
  const ComputeParams params = make_params(o);
  const EstimatorConfig cfg = make_cfg(o);
  BuiltCurves built;
  built.sc = build_sc_curve(dataset, s_grid, params, cfg);
  built.genrm = build_genrm_curves(dataset, s_grid, v_grid, params, cfg);
  if (o.smooth_window > 1) {
    built.sc = smooth(built.sc, o.smooth_window);
    for (auto& curve : built.genrm) curve = smooth(curve, o.smooth_window);
  }
  return built;
}

int run_curves(const AnalysisOpts& o) {
  const Dataset dataset = load_jsonl(o.data_path, o.ragged);
  const auto s_grid = resolve_grid(o.s_grid, dataset.usable_solutions(), "s", 1);
  const auto v_grid = resolve_grid(o.v_grid, dataset.usable_verifications(), "v", 1);
  const BuiltCurves built = build_all_curves(dataset, o, s_grid, v_grid);
  std::vector<Curve> all;
  all.push_back(built.sc);
  all.insert(all.end(), built.genrm.begin(), built.genrm.end());

  RunManifest manifest;
  manifest.command = "curves";
  put_common_parameters(manifest, o, s_grid, v_grid, true);
  manifest.input_digests[o.data_path] = file_digest_hex(o.data_path);

  const fs::path dir = prepare_run_dir(o.out_root, manifest);
  write_file_atomic((dir / "curves.csv").string(), curves_to_csv(all));
  write_file_atomic((dir / "curves.json").string(), curves_to_json(all));
  finish_run(dir, manifest);
  return 0;
}

int run_crossover(const AnalysisOpts& o) {
  const Dataset dataset = load_jsonl(o.data_path, o.ragged);
  const auto s_grid = resolve_grid(o.s_grid, dataset.usable_solutions(), "s", 1);
  const auto v_grid = resolve_grid(o.v_grid, dataset.usable_verifications(), "v", 1);
  const BuiltCurves built = build_all_curves(dataset, o, s_grid, v_grid);
  const CrossoverReport report = crossover(built.sc, built.genrm);

  RunManifest manifest;
  manifest.command = "crossover";
  put_common_parameters(manifest, o, s_grid, v_grid, true);
  manifest.input_digests[o.data_path] = file_digest_hex(o.data_path);

  const fs::path dir = prepare_run_dir(o.out_root, manifest);
  write_file_atomic((dir / "crossover.json").string(), crossover_to_json(report));
  write_file_atomic((dir / "crossover.txt").string(), crossover_summary(report));
  finish_run(dir, manifest);
  std::cout << crossover_summary(report);
  return 0;
}

// ---------------------------------------------------------------------------
// fit

int run_fit(const AnalysisOpts& o) {
  const Dataset dataset = load_jsonl(o.data_path, o.ragged);
  const ComputeParams params = make_params(o);
  const EstimatorConfig cfg = make_cfg(o);
  const auto s_grid = resolve_grid(o.s_grid, dataset.usable_solutions(), "s", 1);
  const auto v_grid = resolve_grid(o.v_grid, dataset.usable_verifications(), "v", 1);
  ScalingOptions options;
  options.n_budgets = o.n_budgets;
  options.smooth_window = o.smooth_window;
  options.extrapolate_flat = o.extrapolate_flat;
  options.s_grid = s_grid;
  options.v_grid = v_grid;
  const ScalingReport report = scaling_report(dataset, params, cfg, options);

  RunManifest manifest;
  manifest.command = "fit";
  put_common_parameters(manifest, o, s_grid, v_grid, true);
  manifest.parameters["budgets"] = std::to_string(o.n_budgets);
  if (o.extrapolate_flat) manifest.parameters["extrapolate-flat"] = "true";
  manifest.input_digests[o.data_path] = file_digest_hex(o.data_path);

  const fs::path dir = prepare_run_dir(o.out_root, manifest);
  write_file_atomic((dir / "scaling.json").string(), scaling_to_json(report));
  write_file_atomic((dir / "trend_solutions.csv").string(), trend_to_csv(report.trend_s));
  write_file_atomic((dir / "trend_verifications.csv").string(), trend_to_csv(report.trend_v));
  write_file_atomic((dir / "scaling.txt").string(), scaling_summary(report));
  finish_run(dir, manifest);
  std::cout << scaling_summary(report);
  return 0;
}

// ---------------------------------------------------------------------------
// report

int run_report(const std::string& artifact_path, const std::string& out_root) {
  const std::string rendered = render_report(read_file(artifact_path));

  RunManifest manifest;
  manifest.command = "report";
  manifest.parameters["artifact"] = artifact_path;
  manifest.parameters["out"] = out_root;
  manifest.input_digests[artifact_path] = file_digest_hex(artifact_path);

  const fs::path dir = prepare_run_dir(out_root, manifest);
  write_file_atomic((dir / "report.txt").string(), rendered);
  finish_run(dir, manifest);
  std::cout << rendered;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compute-matched comparison of majority voting and verifier-based selection"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic record file");
  sim_cmd->add_option("--problems", sim.problems, "number of problems");
  sim_cmd->add_option("--solutions", sim.solutions, "solutions per problem");
  sim_cmd->add_option("--verifications", sim.verifications, "verification scores per solution");
  sim_cmd->add_option("--difficulty", sim.difficulty, "fixed per-solution correctness probability");
  sim_cmd->add_option("--difficulty-alpha", sim.difficulty_alpha,
                      "Beta alpha for per-problem difficulty");
  sim_cmd->add_option("--difficulty-beta", sim.difficulty_beta,
                      "Beta beta for per-problem difficulty");
  sim_cmd->add_option("--distractors", sim.distractors, "distinct wrong answers");
  sim_cmd->add_option("--distractor-decay", sim.distractor_decay,
                      "geometric popularity ratio of wrong answers");
  sim_cmd->add_option("--tpr", sim.tpr, "P(Yes verdict | correct solution)");
  sim_cmd->add_option("--fpr", sim.fpr, "P(Yes verdict | incorrect solution)");
  sim_cmd->add_option("--score-noise", sim.score_noise, "uniform score spread around the verdict");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--scenario", sim.scenario,
                      "preset: precise_verifier | uninformative_verifier | coverage_limited")
      ->check(CLI::IsMember({"precise_verifier", "uninformative_verifier", "coverage_limited"}));
  sim_cmd->add_option("--config", sim.config_file, "flat key=value config file");
  sim_cmd->add_option("--out", sim.out_root, "root directory for run outputs")
      ->capture_default_str();

  AnalysisOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate success rates over the (s, v) grid");
  add_common_flags(eval_cmd, eval_opts, false);

  AnalysisOpts curves_opts;
  auto* curves_cmd =
      app.add_subcommand("curves", "export compute-matched success-rate curves (CSV/JSON)");
  add_common_flags(curves_cmd, curves_opts, true);

  AnalysisOpts crossover_opts;
  auto* crossover_cmd = app.add_subcommand(
      "crossover", "compare the verifier-selection envelope against the majority-voting plateau");
  add_common_flags(crossover_cmd, crossover_opts, true);

  AnalysisOpts fit_opts;
  auto* fit_cmd =
      app.add_subcommand("fit", "fit power laws for the compute-optimal allocation split");
  add_common_flags(fit_cmd, fit_opts, true);
  fit_cmd->add_option("--budgets", fit_opts.n_budgets, "geometric trend budget count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_flag("--extrapolate-flat", fit_opts.extrapolate_flat,
                    "let curves compete beyond their range at plateau value");

  std::string report_artifact;
  std::string report_out = "runs";
  auto* report_cmd =
      app.add_subcommand("report", "render a crossover or scaling JSON artifact as a table");
  report_cmd->add_option("--artifact", report_artifact, "crossover.json or scaling.json path")
      ->required();
  report_cmd->add_option("--out", report_out, "root directory for run outputs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (eval_cmd->parsed()) return run_eval(eval_opts);
    if (curves_cmd->parsed()) return run_curves(curves_opts);
    if (crossover_cmd->parsed()) return run_crossover(crossover_opts);
    if (fit_cmd->parsed()) return run_fit(fit_opts);
    if (report_cmd->parsed()) return run_report(report_artifact, report_out);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
