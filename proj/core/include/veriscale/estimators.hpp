#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "veriscale/dataset.hpp"

namespace veriscale {

// How a solution's verification scores collapse to one number: the mean of
// the raw scores, or the fraction of Yes verdicts.
enum class Aggregation { mean_score, count_yes };

// Subset-sampling strategy for the Monte Carlo estimators. `automatic`
// switches to exact enumeration when the subset count is at most
// exhaustive_limit.
enum class SamplingMode { automatic, monte_carlo, exhaustive };

struct EstimatorConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::mean_score;
  SamplingMode mode = SamplingMode::automatic;
  // Draw an independent verification subset per solution instead of one
  // shared subset per (problem, trial).
  bool per_solution_draws = false;
  // Enumeration-size ceiling for the automatic exhaustive switch.
  double exhaustive_limit = 1e4;

  void validate() const {
    if (trials < 1) throw std::domain_error("trials must be >= 1");
    if (!(exhaustive_limit > 0)) throw std::domain_error("exhaustive limit must be > 0");
  }
};

// Binary correctness indicators sorted by decreasing verifier score, with the
// originating solution index of each entry.
struct AlphaVector {
  std::vector<int> values;
  std::vector<int> source_index;
};

// Mean over problems of the fraction of correct solutions (equals majority
// voting with k = 1).
double pass_at_1(const Dataset& dataset);

double aggregate_score(const std::vector<double>& scores, Aggregation aggregation);

// Exact probability that the top-scored element of a uniformly random
// k-subset is correct:
//   (1 / C(N,k)) * sum_{i=0}^{N-k} C(N-i-1, k-1) * alpha_i.
// Weights sum to C(N,k) exactly; coefficients are exact for N <= 128.
double best_of_k_closed_form(const AlphaVector& alpha, int k);

// Same closed form over real-valued alpha entries (used for analytic
// averaging over score-tie permutations, where a tie block contributes its
// mean correctness at each of its positions).
double best_of_k_closed_form(const std::vector<double>& alpha, int k);

// Majority voting over k solutions drawn uniformly without replacement,
// modal-answer ties broken uniformly at random. Monte Carlo over cfg.trials
// per problem, or exact enumeration of all C(N,k) subsets with ties averaged
// analytically. Deterministic for fixed (seed, trials).
double sc_success_rate(const Dataset& dataset, int k, const EstimatorConfig& cfg);

// Verifier-guided selection: draw v verification indices per (problem,
// trial), aggregate each solution's drawn scores, sort solutions by score
// (ties permuted uniformly at random), and apply the closed form with k = s.
// Exhaustive mode enumerates verification subsets and averages tie
// permutations analytically.
double genrm_success_rate(const Dataset& dataset, int s, int v, const EstimatorConfig& cfg);

// (sr_genrm - sr_sc) / sr_sc. Throws for sr_sc = 0.
inline double relative_improvement(double sr_genrm, double sr_sc) {
  if (sr_sc == 0.0)
    throw std::domain_error("relative improvement undefined for zero baseline");
  return (sr_genrm - sr_sc) / sr_sc;
}

}  // namespace veriscale
