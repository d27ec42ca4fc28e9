#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

namespace spin_atlas {

/// Photoluminescence versus field.
struct Trace {
  std::vector<double> field;  // G, strictly increasing
  std::vector<double> pl;     // arbitrary units
  std::optional<double> temperature_k;

  std::size_t size() const noexcept { return field.size(); }
  /// Throws LengthMismatch, NonMonotonicField or InvalidInput (too short,
  /// non-finite values).
  void validate() const;
};

inline constexpr std::size_t kMinTracePoints = 16;

/// CSV with header `B_gauss,pl`. Lines starting with '#' are comments; a
/// comment of the form `# temperature_K=<value>` sets the temperature.
Trace parse_trace(std::istream& in);
Trace load_trace(const std::filesystem::path& path);

/// Lorentzian dip: pl = baseline * (1 - depth * hwhm^2 / ((B - center)^2 + hwhm^2)).
struct Dip {
  double center = 0.0;  // G
  double hwhm = 0.0;    // G
  double depth = 0.0;   // fraction of the baseline
  double center_err = 0.0;
  double hwhm_err = 0.0;
  double depth_err = 0.0;
  /// Depth indistinguishable from zero; the component can be dropped.
  bool removable = false;

  double contrast_percent() const noexcept { return 100.0 * depth; }
};

struct DipFit {
  std::vector<Dip> dips;  // ascending center
  double baseline_offset = 0.0;  // a in (a + b B)
  double baseline_slope = 0.0;   // b
  double residual_rms = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  double model(double field) const;
};

struct FitOptions {
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;         // relative parameter change
  double prominence_factor = 3.0;  // auto seeds: prominence > factor * MAD noise
};

/// Local minima whose prominence exceeds prominence_factor times the robust
/// (MAD) noise of the detrended trace.
std::vector<double> auto_seeds(const Trace& trace, double prominence_factor = 3.0);

/// Damped least squares (Levenberg-Marquardt, finite-difference Jacobian) of
/// a linear baseline times a sum of Lorentzian dips seeded at `seeds`.
/// Seeds must lie inside the field range and be at least two grid spacings
/// apart. Non-convergence returns the last iterate with converged = false;
/// a rank-deficient Jacobian throws NumericalError.
DipFit fit_dips(const Trace& trace, const std::vector<double>& seeds, const FitOptions& options = {});

/// Restarts the iteration from a full parameter set.
DipFit refit(const Trace& trace, const DipFit& start, const FitOptions& options = {});

/// Sorted |c_j - central| over all dips except the one closest to `central`.
std::vector<double> side_peak_separations(const DipFit& fit, double central);

}  // namespace spin_atlas
