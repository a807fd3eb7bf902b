#pragma once

#include <utility>
#include <vector>

#include "veriscale/curves.hpp"

namespace veriscale {

struct PowerLawFit {
  double exponent = 0.0;
  // Base-2 log of the coefficient: log2(y) = exponent * log2(x) + log_coefficient.
  double log_coefficient = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
  // All y equal: exponent is exactly 0 and r_squared is reported as 1 by
  // convention rather than 0/0.
  bool zero_variance = false;
};

enum class TrendAxis { solutions, verifications };

struct TrendPoint {
  double budget = 0.0;
  int opt_value = 0;
};

struct ScalingOptions {
  // Geometric budget grid size for trend extraction.
  int n_budgets = 32;
  // Curve smoothing window applied before extraction; 1 = off.
  int smooth_window = 1;
  // Let curves compete beyond their covered range at their plateau value.
  bool extrapolate_flat = false;
  // Power-of-two grids; empty means every power of two the dataset supports.
  std::vector<int> s_grid;
  std::vector<int> v_grid;
};

struct ScalingReport {
  PowerLawFit fit_s;
  PowerLawFit fit_v;
  std::vector<TrendPoint> trend_s;
  std::vector<TrendPoint> trend_v;
  // fit_s.exponent > fit_v.exponent: solutions should be scaled faster than
  // verifications.
  bool solutions_scale_faster = false;
};

// opt_value at each budget: for the solutions axis the curves must be the
// fixed-S family (opt_value = best curve's s); for verifications the fixed-V
// family (opt_value = best curve's v). Plateau duplicates are kept.
std::vector<TrendPoint> optimal_trend(const std::vector<Curve>& curves,
                                      const std::vector<double>& budgets, TrendAxis axis,
                                      bool extrapolate_flat = false);

// Ordinary least squares on (log2 x, log2 y): exponent = slope. Requires >= 2
// points, strictly positive coordinates, and non-degenerate x.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Full pipeline: evaluate the success-rate grid once, build both curve
// families, extract both trends over a geometric budget grid, and fit both
// power laws.
ScalingReport scaling_report(const Dataset& dataset, const ComputeParams& params,
                             const EstimatorConfig& cfg, const ScalingOptions& options = {});

}  // namespace veriscale
