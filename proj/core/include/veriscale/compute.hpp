#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "veriscale/dataset.hpp"

namespace veriscale {

// Inference cost model. The unit cost is one solution sample; one
// verification costs lambda solution-equivalents, so a configuration with s
// solutions and v verifications per solution costs s * (1 + lambda * v).
// Budgets are reals so fractional lambda (e.g. a small verifier scoring a
// large generator, lambda = 0.228) works unchanged.
struct ComputeParams {
  double lambda = 1.0;
  // Optional absolute-FLOPs conversion: 2 * params_p FLOPs per generated
  // token, tokens_per_solution tokens per solution sample. Either both are
  // set or neither.
  std::optional<double> params_p;
  std::optional<double> tokens_per_solution;

  void validate() const {
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    if (params_p.has_value() != tokens_per_solution.has_value())
      throw std::domain_error("params and tokens-per-solution must be set together");
    if (params_p && !(*params_p > 0.0)) throw std::domain_error("params must be > 0");
    if (tokens_per_solution && !(*tokens_per_solution > 0.0))
      throw std::domain_error("tokens-per-solution must be > 0");
  }
};

// Budget in solution-equivalents: s * (1 + lambda * v). v = 0 gives exactly s
// (the majority-voting budget).
inline double budget(int s, int v, const ComputeParams& params) {
  if (s < 1) throw std::domain_error("budget: s must be >= 1");
  if (v < 0) throw std::domain_error("budget: v must be >= 0");
  return static_cast<double>(s) * (1.0 + params.lambda * static_cast<double>(v));
}

// Absolute inference FLOPs: 2 * P * T_S * s * (1 + lambda * v), i.e.
// 2 * P FLOPs per output token times the solution-equivalent budget.
inline double absolute_flops(int s, int v, const ComputeParams& params) {
  if (!params.params_p || !params.tokens_per_solution)
    throw std::domain_error("absolute_flops requires params and tokens-per-solution");
  return 2.0 * *params.params_p * *params.tokens_per_solution * budget(s, v, params);
}

// All distinct budgets on the power-of-two lattice s in {1,2,4,...,max_s},
// v in {0,1,2,4,...,max_v}, deduplicated, ascending.
std::vector<double> budget_grid(int max_s, int max_v, const ComputeParams& params);

inline std::vector<double> budget_grid(const Dataset& dataset, const ComputeParams& params) {
  return budget_grid(dataset.usable_solutions(), dataset.usable_verifications(), params);
}

// Powers of two not exceeding limit: {1, 2, 4, ...}; empty for limit < 1.
std::vector<int> pow2_grid(int limit);

// Geometric grid of n budgets spanning [lo, hi] inclusive.
std::vector<double> geometric_budgets(double lo, double hi, int n);

}  // namespace veriscale
