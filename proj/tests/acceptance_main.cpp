// Acceptance gate: one check per shipped guarantee, one PASS/FAIL line each.
// Usage: acceptance_checks <path-to-cli-binary>
// Exit code: number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "test_support.hpp"
#include "veriscale/binomial.hpp"
#include "veriscale/compute.hpp"
#include "veriscale/curves.hpp"
#include "veriscale/estimators.hpp"
#include "veriscale/manifest.hpp"
#include "veriscale/scaling.hpp"
#include "veriscale/synth.hpp"

using namespace veriscale;
using veriscale::testing::make_dataset;
using veriscale::testing::random_problem;
namespace fs = std::filesystem;

namespace {

std::string g_cli;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CmdResult {
  int code = -1;
  std::string output;
};

CmdResult run_shell(const std::string& command) {
  CmdResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string run_dir_of(const std::string& output) {
  const auto pos = output.find("run: ");
  if (pos == std::string::npos) throw std::runtime_error("no run directory in: " + output);
  const auto end = output.find('\n', pos);
  return output.substr(pos + 5, end - pos - 5);
}

std::map<std::string, std::string> snapshot_dir(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file())
      files[entry.path().filename().string()] = read_file(entry.path().string());
  }
  return files;
}

// Rebuilds the exact command line recorded in a run's manifest.
std::string command_from_manifest(const std::string& run_dir) {
  const RunManifest manifest = manifest_from_json(read_file(run_dir + "/manifest.json"));
  std::string cmd = "'" + g_cli + "' " + manifest.command;
  for (const auto& [key, value] : manifest.parameters) {
    const bool is_flag =
        key == "per-solution-draws" || key == "ragged" || key == "extrapolate-flat";
    if (is_flag && value == "true") {
      cmd += " --" + key;
    } else {
      cmd += " --" + key + " '" + value + "'";
    }
  }
  return cmd;
}

// Sorted correctness indicators for the closed form, using each solution's
// single verification score.
AlphaVector alpha_by_score(const ProblemRecord& problem) {
  std::vector<std::pair<double, int>> scored;
  for (const auto& sol : problem.solutions)
    scored.push_back({sol.verification_scores.at(0), sol.correct ? 1 : 0});
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  AlphaVector alpha;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    alpha.values.push_back(scored[i].second);
    alpha.source_index.push_back(static_cast<int>(i));
  }
  return alpha;
}

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

// ---------------------------------------------------------------------------

bool check_closed_form_exactness(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240901);
  for (int n = 1; n <= 8; ++n) {
    for (int round = 0; round < 200; ++round) {
      const ProblemRecord problem = random_problem(rng, n, 1, true);
      const AlphaVector alpha = alpha_by_score(problem);
      for (int k = 1; k <= n; ++k) {
        const double closed = best_of_k_closed_form(alpha, k);
        const double brute = brute_force_best_of_k(problem, k);
        if (std::abs(closed - brute) > 1e-12) {
          *detail = "N=" + std::to_string(n) + " k=" + std::to_string(k) + ": closed " +
                    fmt(closed) + " vs enumerated " + fmt(brute);
          return false;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) {
    *detail = "took " + fmt(elapsed) + " s (budget 10 s)";
    return false;
  }
  return true;
}

bool check_weight_normalization(std::string* detail) {
  for (int n = 1; n <= 20; ++n) {
    for (int k = 1; k <= n; ++k) {
      uint128 sum = 0;
      for (int i = 0; i + k <= n; ++i) sum += choose(n - i - 1, k - 1);
      if (sum != choose(n, k)) {
        *detail = "N=" + std::to_string(n) + " k=" + std::to_string(k);
        return false;
      }
    }
  }
  return true;
}

bool check_majority_voting_estimator(std::string* detail) {
  Rng rng(7701);
  EstimatorConfig exhaustive;
  exhaustive.mode = SamplingMode::exhaustive;
  for (int n = 1; n <= 8; ++n) {
    for (int round = 0; round < 10; ++round) {
      const ProblemRecord problem = random_problem(rng, n, 1, false);
      const Dataset ds = make_dataset({problem});
      for (int k = 1; k <= n; ++k) {
        const double estimator = sc_success_rate(ds, k, exhaustive);
        const double oracle = brute_force_sc(problem, k);
        if (estimator != oracle) {
          *detail = "exhaustive mismatch at N=" + std::to_string(n) + " k=" + std::to_string(k) +
                    ": " + fmt(estimator) + " vs " + fmt(oracle);
          return false;
        }
      }
    }
  }
  EstimatorConfig mc;
  mc.mode = SamplingMode::monte_carlo;
  mc.trials = 10000;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const ProblemRecord problem = random_problem(rng, n, 1, false);
    const Dataset ds = make_dataset({problem});
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    mc.seed = 1000 + static_cast<std::uint64_t>(i);
    const double exact = brute_force_sc(problem, k);
    const double estimate = sc_success_rate(ds, k, mc);
    const double bound = 3.0 * std::sqrt(exact * (1.0 - exact) / mc.trials) + 1e-12;
    if (std::abs(estimate - exact) > bound) {
      *detail = "instance " + std::to_string(i) + ": |" + fmt(estimate) + " - " + fmt(exact) +
                "| > " + fmt(bound);
      return false;
    }
  }
  return true;
}

bool check_verifier_selection_estimator(std::string* detail) {
  Rng rng(9902);
  EstimatorConfig mc;
  mc.mode = SamplingMode::monte_carlo;
  mc.trials = 10000;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int m = 1 + static_cast<int>(rng.below(6));
    const ProblemRecord problem = random_problem(rng, n, m, i % 2 == 0);
    const Dataset ds = make_dataset({problem});
    const int s = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    mc.seed = 2000 + static_cast<std::uint64_t>(i);
    const double exact = brute_force_genrm(problem, s, v);
    const double estimate = genrm_success_rate(ds, s, v, mc);
    const double bound = 3.0 * std::sqrt(exact * (1.0 - exact) / mc.trials) + 1e-12;
    if (std::abs(estimate - exact) > bound) {
      *detail = "instance " + std::to_string(i) + " (N=" + std::to_string(n) + ", M=" +
                std::to_string(m) + ", s=" + std::to_string(s) + ", v=" + std::to_string(v) +
                "): |" + fmt(estimate) + " - " + fmt(exact) + "| > " + fmt(bound);
      return false;
    }
  }
  return true;
}

bool check_budget_identities(std::string* detail) {
  for (double lambda : {0.5, 1.0, 2.0}) {
    ComputeParams params;
    params.lambda = lambda;
    params.params_p = 1e6;
    params.tokens_per_solution = 512.0;
    const double flops_per_unit = 2.0 * 1e6 * 512.0;
    for (int s = 1; s <= 64; s *= 2) {
      if (budget(s, 0, params) != static_cast<double>(s)) {
        *detail = "budget(s, 0) != s at s=" + std::to_string(s);
        return false;
      }
      for (int v = 0; v <= 64; v = v == 0 ? 1 : 2 * v) {
        if (budget(2 * s, v, params) != 2.0 * budget(s, v, params)) {
          *detail = "doubling failed at s=" + std::to_string(s) + " v=" + std::to_string(v) +
                    " lambda=" + fmt(lambda);
          return false;
        }
        if (absolute_flops(s, v, params) / budget(s, v, params) != flops_per_unit) {
          *detail = "FLOPs/budget ratio drifted at s=" + std::to_string(s) + " v=" +
                    std::to_string(v) + " lambda=" + fmt(lambda);
          return false;
        }
      }
    }
  }
  // The doubling identity holds for fractional cost ratios as well.
  ComputeParams fractional;
  fractional.lambda = 0.228;
  for (int s = 1; s <= 512; s *= 2) {
    for (int v = 0; v <= 32; ++v) {
      if (budget(2 * s, v, fractional) != 2.0 * budget(s, v, fractional)) {
        *detail = "doubling failed at lambda=0.228, s=" + std::to_string(s) + " v=" +
                  std::to_string(v);
        return false;
      }
    }
  }
  return true;
}

bool check_power_law_recovery(std::string* detail) {
  for (double exponent : {0.57, 0.39}) {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i <= 12; ++i) {
      const double x = std::exp2(i);
      points.push_back({x, 3.7 * std::pow(x, exponent)});
    }
    const PowerLawFit fit = fit_power_law(points);
    if (std::abs(fit.exponent - exponent) > 1e-9) {
      *detail = "exponent " + fmt(exponent) + " recovered as " + fmt(fit.exponent);
      return false;
    }
    if (fit.r_squared != 1.0) {
      *detail = "r^2 = " + fmt(fit.r_squared) + " on exact data";
      return false;
    }
  }
  // Scale equivariance on imperfect data.
  Rng rng(515);
  std::vector<std::pair<double, double>> noisy;
  for (int i = 1; i <= 14; ++i) {
    const double x = std::exp2(i);
    noisy.push_back({x, 0.9 * std::pow(x, 0.6) * (1.0 + 0.1 * rng.uniform())});
  }
  const PowerLawFit base = fit_power_law(noisy);
  auto scaled = noisy;
  for (auto& [x, y] : scaled) {
    x *= 7.3;
    y *= 2.9;
  }
  const PowerLawFit shifted = fit_power_law(scaled);
  if (std::abs(shifted.exponent - base.exponent) > 1e-9) {
    *detail = "exponent moved from " + fmt(base.exponent) + " to " + fmt(shifted.exponent) +
              " under axis rescaling";
    return false;
  }
  if (std::abs(shifted.r_squared - base.r_squared) > 1e-9) {
    *detail = "r^2 moved under axis rescaling";
    return false;
  }
  return true;
}

bool check_selection_overtakes_voting(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = generate(precise_verifier_scenario());
  ComputeParams params;
  EstimatorConfig cfg;
  const std::vector<int> s_grid = pow2_grid(ds.usable_solutions());
  const std::vector<int> v_grid = pow2_grid(ds.usable_verifications());
  const Curve sc = build_sc_curve(ds, s_grid, params, cfg);
  const std::vector<Curve> genrm = build_genrm_curves(ds, s_grid, v_grid, params, cfg);
  const CrossoverReport report = crossover(sc, genrm);
  const double elapsed = seconds_since(start);
  if (!report.match_ratio.has_value()) {
    *detail = "selection never reaches the majority-voting maximum (sc max " +
              fmt(report.sc_max_sr) + ", envelope max " + fmt(report.envelope_max_sr) + ")";
    return false;
  }
  if (!(*report.match_ratio > 1.0)) {
    *detail = "match_ratio = " + fmt(*report.match_ratio) + " (needs > 1)";
    return false;
  }
  if (!(report.best_gain > 0.0)) {
    *detail = "best_gain = " + fmt(report.best_gain) + " (needs > 0)";
    return false;
  }
  if (elapsed >= 60.0) {
    *detail = "took " + fmt(elapsed) + " s (budget 60 s)";
    return false;
  }
  return true;
}

bool check_allocation_exponent_ordering(std::string* detail) {
  const Dataset ds = generate(coverage_limited_scenario());
  ComputeParams params;
  EstimatorConfig cfg;
  const ScalingReport report = scaling_report(ds, params, cfg);
  if (!(report.fit_s.exponent > report.fit_v.exponent)) {
    *detail = "solutions exponent " + fmt(report.fit_s.exponent) +
              " <= verifications exponent " + fmt(report.fit_v.exponent);
    return false;
  }
  if (!report.solutions_scale_faster) {
    *detail = "ordering flag disagrees with the exponents";
    return false;
  }
  return true;
}

bool check_optimal_allocation_steps(std::string* detail) {
  // Hand-built fixed-S family with multiplicative SR = cov(S) * prec(V):
  // coverage saturates in S while verifier precision keeps growing in V, so
  // the optimal S steps up as the budget grows.
  const std::map<int, double> cov = {{4, 0.55}, {8, 0.70}, {16, 0.80}, {32, 0.86}};
  const std::map<int, double> prec = {{1, 0.50}, {2, 0.62}, {4, 0.72},
                                      {8, 0.80}, {16, 0.86}, {32, 0.90}};
  ComputeParams params;  // lambda = 1
  std::vector<Curve> family;
  for (const auto& [s, cov_s] : cov) {
    Curve curve;
    curve.label = "S=" + std::to_string(s);
    for (const auto& [v, prec_v] : prec) {
      curve.points.push_back({budget(s, v, params), cov_s * prec_v, s, v});
    }
    family.push_back(std::move(curve));
  }
  const std::vector<std::pair<double, int>> expectations = {
      {std::exp2(6.0), 8},
      {std::exp2(7.0), 16},
      {std::exp2(7.5), 16},
      {std::exp2(7.9), 16},
  };
  for (const auto& [c, expected_s] : expectations) {
    const OptimalAllocation alloc = optimal_allocation(family, c);
    if (alloc.s_opt != expected_s) {
      *detail = "at budget " + fmt(c) + ": s_opt = " + std::to_string(alloc.s_opt) +
                " (expected " + std::to_string(expected_s) + ")";
      return false;
    }
  }
  return true;
}

bool check_cli_reruns_are_byte_identical(std::string* detail) {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  const fs::path root = fs::temp_directory_path() / "veriscale-acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string out = (root / "runs").string();

  const CmdResult sim = run_shell("'" + g_cli + "' simulate --problems 6 --solutions 6" +
                                  " --verifications 4 --difficulty 0.35 --seed 21 --out '" +
                                  out + "'");
  if (sim.code != 0) {
    *detail = "simulate failed: " + sim.output;
    return false;
  }
  const std::string sim_dir = run_dir_of(sim.output);
  const std::string data = sim_dir + "/dataset.jsonl";

  std::vector<std::string> first_runs = {sim_dir};
  const std::string common = " --data '" + data + "' --s-grid 1,2,4 --v-grid 1,2,4 --out '" +
                             out + "'";
  for (const std::string& invocation :
       {"eval" + common + " --trials 400 --seed 9", "crossover" + common,
        "fit" + common + " --budgets 8"}) {
    const CmdResult run = run_shell("'" + g_cli + "' " + invocation);
    if (run.code != 0) {
      *detail = invocation + " failed: " + run.output;
      return false;
    }
    first_runs.push_back(run_dir_of(run.output));
  }

  for (const std::string& dir : first_runs) {
    const auto before = snapshot_dir(dir);
    const CmdResult rerun = run_shell(command_from_manifest(dir));
    if (rerun.code != 0) {
      *detail = "re-run failed for " + dir + ": " + rerun.output;
      return false;
    }
    if (run_dir_of(rerun.output) != dir) {
      *detail = "re-run of " + dir + " landed in " + run_dir_of(rerun.output);
      return false;
    }
    const auto after = snapshot_dir(dir);
    if (before != after) {
      *detail = "artifacts changed across re-run of " + dir;
      return false;
    }
    if (before.count("manifest.json") == 0) {
      *detail = "no manifest in " + dir;
      return false;
    }
  }
  unsetenv("SOURCE_DATE_EPOCH");
  return true;
}

struct Check {
  const char* label;
  std::function<bool(std::string*)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
    return 64;
  }
  g_cli = argv[1];

  const std::vector<Check> checks = {
      {"closed-form best-of-k equals exhaustive enumeration (N <= 8, tol 1e-12, < 10 s)",
       check_closed_form_exactness},
      {"top-pick position weights sum to C(N,k) exactly for all N <= 20",
       check_weight_normalization},
      {"majority-voting estimator: exhaustive mode exact, Monte Carlo within 3 SE",
       check_majority_voting_estimator},
      {"verifier-selection estimator within 3 SE of enumeration (N, M <= 6)",
       check_verifier_selection_estimator},
      {"budget model identities hold exactly across the lattice",
       check_budget_identities},
      {"power-law fit: exponent recovery to 1e-9 with r^2 = 1, scale equivariance",
       check_power_law_recovery},
      {"strong-verifier scenario: selection overtakes the majority-voting plateau (< 60 s)",
       check_selection_overtakes_voting},
      {"coverage-limited scenario: optimal solutions scale faster than verifications",
       check_allocation_exponent_ordering},
      {"hand-built family: optimal solution count steps 8 -> 16 between budgets 64 and 128",
       check_optimal_allocation_steps},
      {"CLI runs re-executed from their manifests are byte-identical",
       check_cli_reruns_are_byte_identical},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = checks[i].fn(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (ok) {
      std::printf("PASS %2zu: %s\n", i + 1, checks[i].label);
    } else {
      std::printf("FAIL %2zu: %s (%s)\n", i + 1, checks[i].label, detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures;
}
