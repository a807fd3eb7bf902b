#pragma once

#include <string>
#include <vector>

#include "veriscale/curves.hpp"
#include "veriscale/scaling.hpp"

namespace veriscale {

// Plot-ready exports. CSV uses fixed 6-decimal formatting; JSON keeps full
// round-trip precision.

// Columns: label,s,v,budget,sr.
std::string curves_to_csv(const std::vector<Curve>& curves);
std::string curves_to_json(const std::vector<Curve>& curves);

// Columns: budget,opt_value (one file per axis).
std::string trend_to_csv(const std::vector<TrendPoint>& trend);

std::string crossover_to_json(const CrossoverReport& report);
// One-paragraph plain-text reading of the crossover numbers.
std::string crossover_summary(const CrossoverReport& report);

std::string scaling_to_json(const ScalingReport& report);
std::string scaling_summary(const ScalingReport& report);

// Renders a crossover or scaling JSON artifact as a human-readable table.
std::string render_report(const std::string& artifact_json);

}  // namespace veriscale
