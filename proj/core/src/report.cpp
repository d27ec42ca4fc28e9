#include "spin_atlas/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace spin_atlas {

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

double round_to(double value, int decimals) {
  // Going through the fixed text keeps JSON and CSV output identical.
  const double r = std::stod(format_fixed(value, decimals));
  return r == 0.0 ? 0.0 : r;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  const std::size_t n = sweep.dimension;
  out << "B_gauss";
  for (std::size_t i = 0; i < n; ++i) out << ",eps_" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",p_" << i;
  out << '\n';
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    out << format_fixed(sweep.fields[k], kFieldDecimals);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      out << ',' << format_fixed(sweep.eigenvalues[k](i), kEnergyDecimals);
    }
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      out << ',' << format_fixed(sweep.projections[k](i), kProjectionDecimals);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json sweep_to_json(const SweepResult& sweep) {
  nlohmann::ordered_json doc;
  doc["temperature_K"] = round_to(sweep.temperature_k, 2);
  doc["zfs_MHz"] = round_to(sweep.zfs, kEnergyDecimals);
  doc["shift_MHz"] = round_to(sweep.shift, kEnergyDecimals);
  doc["dimension"] = sweep.dimension;
  auto& points = doc["points"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    nlohmann::ordered_json p;
    p["B_gauss"] = round_to(sweep.fields[k], kFieldDecimals);
    auto& eps = p["eps_MHz"] = nlohmann::ordered_json::array();
    auto& proj = p["p"] = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < sweep.eigenvalues[k].size(); ++i) {
      eps.push_back(round_to(sweep.eigenvalues[k](i), kEnergyDecimals));
      proj.push_back(round_to(sweep.projections[k](i), kProjectionDecimals));
    }
    points.push_back(std::move(p));
  }
  return doc;
}

nlohmann::ordered_json feature_to_json(const CrossingFeature& feature) {
  nlohmann::ordered_json f;
  f["center_G"] = round_to(feature.center, kFieldDecimals);
  f["span_G"] = {round_to(feature.span_lo, kFieldDecimals), round_to(feature.span_hi, kFieldDecimals)};
  f["kind"] = feature.kind();
  f["min_gap_MHz"] = round_to(feature.min_gap(), kEnergyDecimals);
  auto& lines = f["lines"] = nlohmann::ordered_json::array();
  for (const auto& l : feature.lines) {
    nlohmann::ordered_json j;
    j["field_G"] = round_to(l.field, kFieldDecimals);
    j["levels"] = {l.lower_level, l.lower_level + 1};
    j["kind"] = to_string(l.kind);
    j["min_gap_MHz"] = round_to(l.min_gap, kEnergyDecimals);
    j["projection_jump"] = round_to(l.projection_jump, 4);
    lines.push_back(std::move(j));
  }
  if (feature.slope) f["slope_G_per_K"] = round_to(*feature.slope, kSlopeDecimals);
  return f;
}

nlohmann::ordered_json features_to_json(const std::vector<CrossingFeature>& features) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : features) arr.push_back(feature_to_json(f));
  return arr;
}

std::string temperature_shift_to_csv(const TemperatureShift& shift) {
  std::ostringstream out;
  out << "# slope_G_per_K=" << (shift.slope ? format_fixed(*shift.slope, kSlopeDecimals) : "nan") << '\n';
  out << "# reference_center_G=" << format_fixed(shift.reference_center, kFieldDecimals) << '\n';
  out << "T_K,center_G,delta_G,found\n";
  for (const auto& p : shift.points) {
    out << format_fixed(p.temperature_k, 2) << ',' << format_fixed(p.center, kFieldDecimals) << ','
        << format_fixed(p.delta, kFieldDecimals) << ',' << (p.found ? 1 : 0) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json temperature_shift_to_json(const TemperatureShift& shift) {
  nlohmann::ordered_json doc;
  doc["reference_center_G"] = round_to(shift.reference_center, kFieldDecimals);
  doc["slope_G_per_K"] = shift.slope ? nlohmann::ordered_json(round_to(*shift.slope, kSlopeDecimals)) : nlohmann::ordered_json(nullptr);
  doc["lost"] = shift.lost;
  auto& pts = doc["points"] = nlohmann::ordered_json::array();
  for (const auto& p : shift.points) {
    nlohmann::ordered_json j;
    j["T_K"] = round_to(p.temperature_k, 2);
    j["center_G"] = p.found ? nlohmann::ordered_json(round_to(p.center, kFieldDecimals)) : nlohmann::ordered_json(nullptr);
    j["delta_G"] = p.found ? nlohmann::ordered_json(round_to(p.delta, kFieldDecimals)) : nlohmann::ordered_json(nullptr);
    j["found"] = p.found;
    pts.push_back(std::move(j));
  }
  return doc;
}

nlohmann::ordered_json dip_fit_to_json(const DipFit& fit, const std::vector<double>& separations) {
  nlohmann::ordered_json doc;
  auto& dips = doc["dips"] = nlohmann::ordered_json::array();
  for (const auto& d : fit.dips) {
    nlohmann::ordered_json j;
    j["center_G"] = round_to(d.center, kFieldDecimals);
    j["center_err_G"] = round_to(d.center_err, kFieldDecimals);
    j["hwhm_G"] = round_to(d.hwhm, kFieldDecimals);
    j["hwhm_err_G"] = round_to(d.hwhm_err, kFieldDecimals);
    j["depth"] = round_to(d.depth, 6);
    j["depth_err"] = round_to(d.depth_err, 6);
    j["contrast_percent"] = round_to(d.contrast_percent(), 4);
    j["removable"] = d.removable;
    dips.push_back(std::move(j));
  }
  doc["baseline"] = {{"offset", round_to(fit.baseline_offset, 8)}, {"slope_per_G", round_to(fit.baseline_slope, 10)}};
  doc["residual_rms"] = round_to(fit.residual_rms, 8);
  doc["iterations"] = fit.iterations;
  doc["converged"] = fit.converged;
  auto& seps = doc["separations_G"] = nlohmann::ordered_json::array();
  for (double s : separations) seps.push_back(round_to(s, kFieldDecimals));
  return doc;
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace spin_atlas
