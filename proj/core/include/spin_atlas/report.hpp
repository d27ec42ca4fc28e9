#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spin_atlas/features.hpp"
#include "spin_atlas/sweep.hpp"
#include "spin_atlas/trace.hpp"

namespace spin_atlas {

// Fixed output precision: fields 0.01 G, energies 1e-4 MHz, slopes 1e-4 G/K.
inline constexpr int kFieldDecimals = 2;
inline constexpr int kEnergyDecimals = 4;
inline constexpr int kSlopeDecimals = 4;
inline constexpr int kProjectionDecimals = 6;

/// printf("%.*f") with negative zero printed as zero.
std::string format_fixed(double value, int decimals);
/// Rounded to `decimals` places for JSON emission.
double round_to(double value, int decimals);

/// Header `B_gauss,eps_0..eps_{n-1},p_0..p_{n-1}`, one row per field point.
std::string sweep_to_csv(const SweepResult& sweep);
nlohmann::ordered_json sweep_to_json(const SweepResult& sweep);

nlohmann::ordered_json feature_to_json(const CrossingFeature& feature);
nlohmann::ordered_json features_to_json(const std::vector<CrossingFeature>& features);

/// Columns T_K,center_G,delta_G,found with a leading `# slope_G_per_K=` line.
std::string temperature_shift_to_csv(const TemperatureShift& shift);
nlohmann::ordered_json temperature_shift_to_json(const TemperatureShift& shift);

nlohmann::ordered_json dip_fit_to_json(const DipFit& fit, const std::vector<double>& separations);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace spin_atlas
