#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "spin_atlas/sweep.hpp"

namespace spin_atlas {

enum class CrossingKind { True, Avoided };

std::string_view to_string(CrossingKind kind);

/// A level crossing between adjacent levels (lower_level, lower_level + 1).
/// Unrefined events carry the grid estimate of the field and gap; refinement
/// replaces them with the located gap minimum.
struct CrossingEvent {
  double field = 0.0;       // G
  double bracket_lo = 0.0;  // G
  double bracket_hi = 0.0;  // G
  std::size_t lower_level = 0;
  double min_gap = 0.0;     // MHz, >= 0
  CrossingKind kind = CrossingKind::Avoided;
  double projection_jump = 0.0;
  bool refined = false;
};

struct DetectionOptions {
  /// |p_i(k+1) - p_i(k)| above this marks an event.
  double jump_threshold = 0.4;
  /// Gap minima below the ceiling count only if the p values of the pair
  /// change by at least this much across the minimum's basin.
  double transfer_threshold = 0.2;
  double gap_ceiling = 30.0;  // MHz
  /// Maximum half-width of the basin used to measure the transfer, gauss.
  double transfer_window = 20.0;
};

/// Candidate events from a sweep, ordered by field then level. Uses the
/// projections and eigenvalues only.
std::vector<CrossingEvent> detect_events(const SweepResult& sweep, const DetectionOptions& options = {});

struct RefineOptions {
  /// Reported field resolution; the search itself runs ten times finer.
  double resolution = 0.01;  // G
  double true_gap = 0.05;    // MHz
  /// Samples used to split a bracket into unimodal pieces.
  std::size_t bracket_samples = 7;
  /// Above this dimension refine_all searches a reduced model first: the
  /// Hamiltonian restricted to the eigenvectors of the `surrogate_margin`
  /// levels on either side of the pair at the bracket center. The final gap
  /// uses a wider window of `final_margin` levels per side (0: the full
  /// Hamiltonian).
  std::size_t surrogate_min_dimension = 256;
  std::size_t surrogate_margin = 12;
  std::size_t final_margin = 64;
};

/// Locates the gap minimum inside the event bracket and classifies it. A
/// bracket holding several minima is split and every minimum is returned.
std::vector<CrossingEvent> refine_and_classify(const SpectrumEvaluator& evaluator, const CrossingEvent& event,
                                               const RefineOptions& options = {});

std::vector<CrossingEvent> refine_and_classify(const SpinSystemSpec& spec, const CrossingEvent& event,
                                               double temperature_k, const ThermalZfsModel& model,
                                               const RefineOptions& options = {});

/// Refines a batch in parallel and merges duplicates (same level pair, fields
/// closer than the resolution). Output is ordered by field then level.
std::vector<CrossingEvent> refine_all(const SpectrumEvaluator& evaluator, const std::vector<CrossingEvent>& events,
                                      const RefineOptions& options = {}, unsigned threads = 0);

/// Minimum of the gap between levels `lower` and `lower + 1` on [lo, hi] by
/// golden-section search; returns {field, gap}.
struct GapMinimum {
  double field = 0.0;
  double gap = 0.0;
};
GapMinimum minimize_gap(const SpectrumEvaluator& evaluator, std::size_t lower, double lo, double hi,
                        double tolerance);

}  // namespace spin_atlas
