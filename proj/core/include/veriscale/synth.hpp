#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "veriscale/dataset.hpp"
#include "veriscale/estimators.hpp"

namespace veriscale {

// Synthetic solution/verification process. Per problem: a correct-solution
// probability p (fixed, or Beta-distributed per problem); wrong answers drawn
// from `distractors` distinct strings with geometrically decaying popularity
// (a dominant distractor is what makes majority voting beatable). Each
// verification draws a Yes/No verdict from tpr/fpr and a score = verdict
// +/- uniform(0, score_noise), clamped to [0,1].
struct SynthConfig {
  int n_problems = 32;
  int n_solutions = 16;
  int n_verifications = 8;

  double difficulty = 0.3;
  // (alpha, beta) of a per-problem Beta draw; overrides `difficulty`.
  std::optional<std::pair<double, double>> difficulty_beta;

  int distractors = 3;
  double distractor_decay = 0.5;

  double verifier_tpr = 0.85;
  double verifier_fpr = 0.15;
  // Keep <= 0.5 so the sampled score preserves the drawn verdict.
  double score_noise = 0.1;

  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic per seed, bitwise-identical across platforms.
Dataset generate(const SynthConfig& config);

// Exact oracles by full enumeration; guarded against combinatorial blow-up
// (subset count <= 1e6). Ties are averaged analytically, never sampled.
double brute_force_best_of_k(const ProblemRecord& problem, int k,
                             Aggregation aggregation = Aggregation::mean_score);
double brute_force_sc(const ProblemRecord& problem, int k);
double brute_force_genrm(const ProblemRecord& problem, int s, int v,
                         Aggregation aggregation = Aggregation::mean_score);

// Shipped scenarios (frozen seeds).
// Moderate coverage with a popular distractor and a verifier whose single
// verdict is barely informative but becomes precise when many verdicts are
// averaged: majority voting wins at low budget, verifier selection
// overtakes its plateau at high budget.
SynthConfig precise_verifier_scenario();
// tpr = fpr: the verifier carries no signal, so verifier selection never
// reaches the majority-voting maximum.
SynthConfig uninformative_verifier_scenario();
// Coverage grows slowly with extra solutions while a strong verifier
// saturates quickly: the optimal solution count scales faster with budget
// than the optimal verification count.
SynthConfig coverage_limited_scenario();

}  // namespace veriscale
