#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veriscale/compute.hpp"
#include "veriscale/dataset.hpp"
#include "veriscale/estimators.hpp"

namespace veriscale {

struct CurvePoint {
  double budget = 0.0;
  double sr = 0.0;
  int s = 0;
  int v = 0;
};

// Success rate against budget for one family member (fixed v varying s, or
// fixed s varying v). Budgets strictly increase within a curve.
struct Curve {
  std::string label;
  std::vector<CurvePoint> points;

  double min_budget() const { return points.front().budget; }
  double max_budget() const { return points.back().budget; }
  bool covers(double c) const {
    return !points.empty() && c >= min_budget() && c <= max_budget();
  }
};

struct OptimalAllocation {
  double budget = 0.0;
  int s_opt = 0;
  int v_opt = 0;
  double sr = 0.0;
};

struct CrossoverReport {
  // Smallest budget where the verifier-selection envelope reaches the
  // majority-voting maximum, divided by the budget where that maximum is
  // first attained. Empty when the envelope never reaches it.
  std::optional<double> match_ratio;
  // Envelope maximum minus majority-voting maximum (absolute SR difference;
  // negative when the envelope stays below).
  double best_gain = 0.0;
  // Budget where best_gain is attained / majority-voting peak budget.
  double gain_ratio = 0.0;

  double sc_max_sr = 0.0;
  double sc_peak_budget = 0.0;
  double envelope_max_sr = 0.0;
  double envelope_best_budget = 0.0;
};

// Majority-voting curve: one point (budget(s, 0), sc_success_rate(s)) per
// entry of s_list. Label "SC".
Curve build_sc_curve(const Dataset& dataset, const std::vector<int>& s_list,
                     const ComputeParams& params, const EstimatorConfig& cfg);

// One curve per v in v_list, points (budget(s, v), genrm_success_rate(s, v))
// over s_list. Labels "V=<v>".
std::vector<Curve> build_genrm_curves(const Dataset& dataset, const std::vector<int>& s_list,
                                      const std::vector<int>& v_list, const ComputeParams& params,
                                      const EstimatorConfig& cfg);

// Fixed-S family: one curve per s in s_list, points over v_list ("S=<s>").
std::vector<Curve> build_fixed_s_curves(const Dataset& dataset, const std::vector<int>& s_list,
                                        const std::vector<int>& v_list,
                                        const ComputeParams& params, const EstimatorConfig& cfg);

// Centered moving average of SR over `window` points (odd); endpoints use
// symmetrically shrunken windows; budgets unchanged. window = 1 is identity.
Curve smooth(const Curve& curve, int window);

// Piecewise-linear interpolation in (log2 budget, SR) space. Out-of-range
// budgets throw unless extrapolate_flat, which holds the endpoint SRs
// constant on both sides.
double sr_at_budget(const Curve& curve, double c, bool extrapolate_flat = false);

// Best curve at budget c among those covering it; reports the curve's fixed
// parameter and the lattice point at-or-below c on that curve (allocations
// change in steps, not continuously). SR ties prefer the smaller v, then the
// smaller s.
OptimalAllocation optimal_allocation(const std::vector<Curve>& curves, double c,
                                     bool extrapolate_flat = false);

// Compares the upper envelope (pointwise max) of the fixed-V curves against
// the majority-voting curve's saturated maximum.
CrossoverReport crossover(const Curve& sc_curve, const std::vector<Curve>& genrm_curves);

}  // namespace veriscale
