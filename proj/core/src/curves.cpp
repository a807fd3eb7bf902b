#include "veriscale/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace veriscale {

namespace {

std::vector<int> sorted_unique(std::vector<int> values, const char* what) {
  if (values.empty()) throw std::domain_error(std::string(what) + " list is empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() < 1) throw std::domain_error(std::string(what) + " values must be >= 1");
  return values;
}

void check_strictly_increasing(const Curve& curve) {
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].budget > curve.points[i - 1].budget))
      throw std::domain_error("curve budgets must strictly increase");
  }
}

}  // namespace

Curve build_sc_curve(const Dataset& dataset, const std::vector<int>& s_list,
                     const ComputeParams& params, const EstimatorConfig& cfg) {
  params.validate();
  const std::vector<int> s_values = sorted_unique(s_list, "s");
  Curve curve;
  curve.label = "SC";
  for (int s : s_values) {
    curve.points.push_back({budget(s, 0, params), sc_success_rate(dataset, s, cfg), s, 0});
  }
  check_strictly_increasing(curve);
  return curve;
}

std::vector<Curve> build_genrm_curves(const Dataset& dataset, const std::vector<int>& s_list,
                                      const std::vector<int>& v_list, const ComputeParams& params,
                                      const EstimatorConfig& cfg) {
  params.validate();
  const std::vector<int> s_values = sorted_unique(s_list, "s");
  const std::vector<int> v_values = sorted_unique(v_list, "v");
  std::vector<Curve> curves;
  for (int v : v_values) {
    Curve curve;
    curve.label = "V=" + std::to_string(v);
    for (int s : s_values) {
      curve.points.push_back(
          {budget(s, v, params), genrm_success_rate(dataset, s, v, cfg), s, v});
    }
    check_strictly_increasing(curve);
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<Curve> build_fixed_s_curves(const Dataset& dataset, const std::vector<int>& s_list,
                                        const std::vector<int>& v_list,
                                        const ComputeParams& params, const EstimatorConfig& cfg) {
  params.validate();
  const std::vector<int> s_values = sorted_unique(s_list, "s");
  const std::vector<int> v_values = sorted_unique(v_list, "v");
  std::vector<Curve> curves;
  for (int s : s_values) {
    Curve curve;
    curve.label = "S=" + std::to_string(s);
    for (int v : v_values) {
      curve.points.push_back(
          {budget(s, v, params), genrm_success_rate(dataset, s, v, cfg), s, v});
    }
    check_strictly_increasing(curve);
    curves.push_back(std::move(curve));
  }
  return curves;
}

Curve smooth(const Curve& curve, int window) {
  if (window < 1 || window % 2 == 0)
    throw std::domain_error("smoothing window must be odd and >= 1");
  if (static_cast<std::size_t>(window) > curve.points.size())
    throw std::domain_error("smoothing window exceeds curve length");
  if (window == 1) return curve;
  Curve out = curve;
  const int n = static_cast<int>(curve.points.size());
  const int half = (window - 1) / 2;
  for (int i = 0; i < n; ++i) {
    const int reach = std::min({half, i, n - 1 - i});
    double acc = 0.0;
    for (int j = i - reach; j <= i + reach; ++j)
      acc += curve.points[static_cast<std::size_t>(j)].sr;
    out.points[static_cast<std::size_t>(i)].sr = acc / static_cast<double>(2 * reach + 1);
  }
  return out;
}

double sr_at_budget(const Curve& curve, double c, bool extrapolate_flat) {
  if (curve.points.empty()) throw std::domain_error("empty curve");
  if (!(c > 0.0)) throw std::domain_error("budget must be positive");
  if (c < curve.min_budget()) {
    if (extrapolate_flat) return curve.points.front().sr;
    throw std::domain_error("budget below the curve's covered range");
  }
  if (c > curve.max_budget()) {
    if (extrapolate_flat) return curve.points.back().sr;
    throw std::domain_error("budget above the curve's covered range");
  }
  // Exact knot hits return the raw point, so interpolation agrees with the
  // curve at every knot.
  auto it = std::lower_bound(curve.points.begin(), curve.points.end(), c,
                             [](const CurvePoint& p, double value) { return p.budget < value; });
  if (it != curve.points.end() && it->budget == c) return it->sr;
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double x0 = std::log2(lo.budget);
  const double x1 = std::log2(hi.budget);
  const double t = (std::log2(c) - x0) / (x1 - x0);
  return lo.sr + t * (hi.sr - lo.sr);
}

OptimalAllocation optimal_allocation(const std::vector<Curve>& curves, double c,
                                     bool extrapolate_flat) {
  if (curves.empty()) throw std::domain_error("no curves given");
  bool found = false;
  OptimalAllocation best;
  for (const auto& curve : curves) {
    if (curve.points.empty()) throw std::domain_error("empty curve");
    // An allocation must be affordable: the curve's cheapest point has to sit
    // at or below the budget. Flat extrapolation extends plateaus rightward
    // only.
    if (c < curve.min_budget()) continue;
    if (c > curve.max_budget() && !extrapolate_flat) continue;
    const double sr = sr_at_budget(curve, c, extrapolate_flat);
    // The lattice point actually bought: the last point at or below c
    // (allocations move in step-changes between lattice points).
    auto it = std::upper_bound(curve.points.begin(), curve.points.end(), c,
                               [](double value, const CurvePoint& p) { return value < p.budget; });
    const CurvePoint& at = *(it - 1);
    const bool improves =
        !found || sr > best.sr ||
        (sr == best.sr && (at.v < best.v_opt || (at.v == best.v_opt && at.s < best.s_opt)));
    if (improves) {
      best = {c, at.s, at.v, sr};
      found = true;
    }
  }
  if (!found) throw std::domain_error("no curve covers the requested budget");
  return best;
}

CrossoverReport crossover(const Curve& sc_curve, const std::vector<Curve>& genrm_curves) {
  if (sc_curve.points.empty()) throw std::domain_error("empty majority-voting curve");
  if (genrm_curves.empty()) throw std::domain_error("no verifier-selection curves");
  for (const auto& curve : genrm_curves) {
    if (curve.points.empty()) throw std::domain_error("empty verifier-selection curve");
  }

  CrossoverReport report;
  report.sc_max_sr = -std::numeric_limits<double>::infinity();
  for (const auto& p : sc_curve.points) {
    if (p.sr > report.sc_max_sr) {
      report.sc_max_sr = p.sr;
      report.sc_peak_budget = p.budget;
    }
  }

  report.envelope_max_sr = -std::numeric_limits<double>::infinity();
  for (const auto& curve : genrm_curves) {
    for (const auto& p : curve.points) {
      // Strict > keeps the smallest budget attaining the maximum; points are
      // visited in increasing budget order within each curve, so compare
      // budgets on exact SR ties across curves.
      if (p.sr > report.envelope_max_sr ||
          (p.sr == report.envelope_max_sr && p.budget < report.envelope_best_budget)) {
        report.envelope_max_sr = p.sr;
        report.envelope_best_budget = p.budget;
      }
    }
  }
  report.best_gain = report.envelope_max_sr - report.sc_max_sr;
  report.gain_ratio = report.envelope_best_budget / report.sc_peak_budget;

  // Smallest budget where the envelope (pointwise max of the curves,
  // piecewise linear in log2-budget) reaches the majority-voting maximum.
  const double target = report.sc_max_sr;
  std::set<double> knot_set;
  for (const auto& curve : genrm_curves) {
    for (const auto& p : curve.points) knot_set.insert(p.budget);
  }
  const std::vector<double> knots(knot_set.begin(), knot_set.end());
  std::optional<double> match_budget;
  for (std::size_t i = 0; i < knots.size() && !match_budget; ++i) {
    const double b = knots[i];
    for (const auto& curve : genrm_curves) {
      if (!curve.covers(b)) continue;
      if (sr_at_budget(curve, b) >= target) {
        match_budget = b;
        break;
      }
    }
    if (match_budget || i + 1 == knots.size()) break;
    // Upward crossings strictly inside the segment (knots[i], knots[i+1]).
    const double b_next = knots[i + 1];
    double earliest = std::numeric_limits<double>::infinity();
    for (const auto& curve : genrm_curves) {
      if (curve.min_budget() > b || curve.max_budget() < b_next) continue;
      const double y0 = sr_at_budget(curve, b);
      const double y1 = sr_at_budget(curve, b_next);
      if (y0 >= target || y1 < target) continue;
      const double x0 = std::log2(b);
      const double x1 = std::log2(b_next);
      const double x = x0 + (target - y0) * (x1 - x0) / (y1 - y0);
      earliest = std::min(earliest, std::exp2(x));
    }
    if (earliest < b_next) match_budget = earliest;
  }
  if (match_budget) report.match_ratio = *match_budget / report.sc_peak_budget;
  return report;
}

}  // namespace veriscale
