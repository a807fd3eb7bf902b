#include "veriscale/export.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "veriscale/dataset.hpp"

namespace veriscale {

namespace {

using nlohmann::json;

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

json curve_to_json(const Curve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"s", p.s}, {"v", p.v}, {"budget", p.budget}, {"sr", p.sr}});
  }
  return json{{"label", curve.label}, {"points", points}};
}

json fit_to_json(const PowerLawFit& fit) {
  return json{{"exponent", fit.exponent},
              {"log_coefficient", fit.log_coefficient},
              {"r_squared", fit.r_squared},
              {"n_points", fit.n_points},
              {"zero_variance", fit.zero_variance}};
}

json trend_to_json(const std::vector<TrendPoint>& trend) {
  json arr = json::array();
  for (const auto& t : trend) arr.push_back({{"budget", t.budget}, {"opt_value", t.opt_value}});
  return arr;
}

std::string table_row(const std::string& key, const std::string& value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "  %-24s %s\n", key.c_str(), value.c_str());
  return buf;
}

std::string render_crossover_table(const json& obj) {
  std::ostringstream out;
  out << "crossover report\n";
  out << table_row("sc_max_sr", fixed4(obj.at("sc_max_sr").get<double>()));
  out << table_row("sc_peak_budget", fixed4(obj.at("sc_peak_budget").get<double>()));
  out << table_row("envelope_max_sr", fixed4(obj.at("envelope_max_sr").get<double>()));
  out << table_row("envelope_best_budget", fixed4(obj.at("envelope_best_budget").get<double>()));
  const auto& match = obj.at("match_ratio");
  out << table_row("match_ratio", match.is_null() ? "not reached" : fixed4(match.get<double>()));
  out << table_row("best_gain", fixed4(obj.at("best_gain").get<double>()));
  out << table_row("gain_ratio", fixed4(obj.at("gain_ratio").get<double>()));
  return out.str();
}

std::string render_scaling_table(const json& obj) {
  std::ostringstream out;
  out << "scaling report\n";
  for (const char* key : {"fit_s", "fit_v"}) {
    const auto& fit = obj.at(key);
    out << table_row(std::string(key) + ".exponent", fixed4(fit.at("exponent").get<double>()));
    out << table_row(std::string(key) + ".r_squared", fixed4(fit.at("r_squared").get<double>()));
    out << table_row(std::string(key) + ".n_points",
                     std::to_string(fit.at("n_points").get<int>()));
  }
  out << table_row("solutions_scale_faster",
                   obj.at("solutions_scale_faster").get<bool>() ? "true" : "false");
  return out.str();
}

}  // namespace

std::string curves_to_csv(const std::vector<Curve>& curves) {
  std::ostringstream out;
  out << "label,s,v,budget,sr\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << curve.label << "," << p.s << "," << p.v << "," << fixed6(p.budget) << ","
          << fixed6(p.sr) << "\n";
    }
  }
  return out.str();
}

std::string curves_to_json(const std::vector<Curve>& curves) {
  json arr = json::array();
  for (const auto& curve : curves) arr.push_back(curve_to_json(curve));
  return json{{"curves", arr}}.dump(2) + "\n";
}

std::string trend_to_csv(const std::vector<TrendPoint>& trend) {
  std::ostringstream out;
  out << "budget,opt_value\n";
  for (const auto& t : trend) out << fixed6(t.budget) << "," << t.opt_value << "\n";
  return out.str();
}

std::string crossover_to_json(const CrossoverReport& report) {
  json obj;
  obj["match_ratio"] = report.match_ratio ? json(*report.match_ratio) : json(nullptr);
  obj["match_reached"] = report.match_ratio.has_value();
  obj["best_gain"] = report.best_gain;
  obj["gain_ratio"] = report.gain_ratio;
  obj["sc_max_sr"] = report.sc_max_sr;
  obj["sc_peak_budget"] = report.sc_peak_budget;
  obj["envelope_max_sr"] = report.envelope_max_sr;
  obj["envelope_best_budget"] = report.envelope_best_budget;
  return obj.dump(2) + "\n";
}

std::string crossover_summary(const CrossoverReport& report) {
  std::ostringstream out;
  out << "Majority voting saturates at success rate " << fixed4(report.sc_max_sr)
      << ", first attained at budget " << fixed4(report.sc_peak_budget) << ". ";
  if (report.match_ratio) {
    out << "Verifier-based selection matches that success rate at "
        << fixed4(*report.match_ratio) << "x the compute. ";
  } else {
    out << "Verifier-based selection never reaches that success rate within the evaluated "
           "budget range. ";
  }
  if (report.best_gain > 0) {
    out << "Its best configuration improves on the majority-voting maximum by "
        << fixed4(report.best_gain) << " (absolute success rate), using "
        << fixed4(report.gain_ratio) << "x the compute of the majority-voting peak.";
  } else {
    out << "Its best configuration stays " << fixed4(-report.best_gain)
        << " (absolute success rate) below the majority-voting maximum.";
  }
  out << "\n";
  return out.str();
}

std::string scaling_to_json(const ScalingReport& report) {
  json obj;
  obj["fit_s"] = fit_to_json(report.fit_s);
  obj["fit_v"] = fit_to_json(report.fit_v);
  obj["trends"] = {{"solutions", trend_to_json(report.trend_s)},
                   {"verifications", trend_to_json(report.trend_v)}};
  obj["solutions_scale_faster"] = report.solutions_scale_faster;
  return obj.dump(2) + "\n";
}

std::string scaling_summary(const ScalingReport& report) {
  std::ostringstream out;
  out << "Optimal solution count scales as C^" << fixed4(report.fit_s.exponent)
      << " (r^2 " << fixed4(report.fit_s.r_squared) << ", " << report.fit_s.n_points
      << " points); optimal verification count scales as C^" << fixed4(report.fit_v.exponent)
      << " (r^2 " << fixed4(report.fit_v.r_squared) << ", " << report.fit_v.n_points
      << " points). ";
  if (report.solutions_scale_faster) {
    out << "Solutions should be scaled faster than verifications as the budget grows.";
  } else {
    out << "Verifications scale at least as fast as solutions on this data.";
  }
  out << "\n";
  return out.str();
}

std::string render_report(const std::string& artifact_json) {
  json obj;
  try {
    obj = json::parse(artifact_json);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed report artifact: ") + e.what());
  }
  if (obj.contains("match_reached")) return render_crossover_table(obj);
  if (obj.contains("fit_s")) return render_scaling_table(obj);
  throw DataError("unrecognized report artifact (expected crossover or scaling JSON)");
}

}  // namespace veriscale
