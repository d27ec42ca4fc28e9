#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "spin_atlas/crossing.hpp"
#include "spin_atlas/sweep.hpp"

namespace spin_atlas {

/// A group of crossing lines that shows up as one cross-relaxation feature.
struct CrossingFeature {
  double center = 0.0;   // G, median of the line fields
  double span_lo = 0.0;  // G
  double span_hi = 0.0;  // G
  std::vector<CrossingEvent> lines;  // distinct fields, ascending
  std::optional<double> slope;       // G/K at the reference temperature

  double min_gap() const;
  /// "true", "avoided" or "mixed".
  std::string_view kind() const;
};

/// Two-level single-linkage clustering of refined events. Events chained
/// within `line_merge` form one line (median field, tightest gap, bracket =
/// member range); lines chained within `cluster_radius` form a feature.
std::vector<CrossingFeature> cluster_features(const std::vector<CrossingEvent>& events, double cluster_radius = 20.0,
                                              double line_merge = 2.0);

struct FeatureSearchOptions {
  SweepOptions sweep;
  DetectionOptions detection;
  RefineOptions refine;
  double cluster_radius = 20.0;
  double line_merge = 2.0;
};

/// Sweep, detect, refine and cluster in one call.
std::vector<CrossingFeature> find_features(const SpinSystemSpec& spec, const FeatureSearchOptions& options = {});

struct TemperaturePoint {
  double temperature_k = 0.0;
  double center = 0.0;  // G; NaN when lost
  double delta = 0.0;   // center - center(reference), G
  bool found = false;
};

struct TemperatureShift {
  double reference_center = 0.0;  // G at the reference temperature
  std::size_t lower_level = 0;    // level pair tracked at the reference
  std::vector<TemperaturePoint> points;  // in the order requested
  std::optional<double> slope;    // G/K, central difference at the reference
  bool lost = false;
};

struct ShiftOptions {
  double reference_k = 300.0;
  double window = 5.0;              // G, half-width of each local search
  std::size_t scan_points = 41;
  double slope_step = 5.0;          // K
  double resolution = 0.001;        // G
  DetectionOptions detection;
  unsigned threads = 0;
};

/// Follows the crossing line nearest `seed_field` (located at the reference
/// temperature) through `temperatures`, continuing outward from the
/// reference so every step is seeded by its neighbor. A step with no
/// crossing in the window marks that point and every later one on the same
/// side as lost; the partial result is still returned. Throws NotFound when
/// nothing is found at the reference.
TemperatureShift temperature_shift(const SpinSystemSpec& spec, double seed_field,
                                   const std::vector<double>& temperatures, const ThermalZfsModel& model = {},
                                   const ShiftOptions& options = {});

}  // namespace spin_atlas
