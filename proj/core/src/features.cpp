#include "spin_atlas/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

double CrossingFeature::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& l : lines) g = std::min(g, l.min_gap);
  return g;
}

std::string_view CrossingFeature::kind() const {
  bool any_true = false;
  bool any_avoided = false;
  for (const auto& l : lines) (l.kind == CrossingKind::True ? any_true : any_avoided) = true;
  if (any_true && any_avoided) return "mixed";
  return any_true ? "true" : "avoided";
}

std::vector<CrossingFeature> cluster_features(const std::vector<CrossingEvent>& events, double cluster_radius,
                                              double line_merge) {
  if (cluster_radius < 0.0 || line_merge < 0.0) throw InvalidInput("cluster radius must be non-negative");
  std::vector<CrossingEvent> sorted = events;
  std::sort(sorted.begin(), sorted.end(), [](const CrossingEvent& a, const CrossingEvent& b) {
    if (a.field != b.field) return a.field < b.field;
    return a.lower_level < b.lower_level;
  });

  // Crossings closer than line_merge are one spectroscopic line: its field is
  // the median member field, its gap and kind those of the tightest member.
  std::vector<std::vector<CrossingEvent>> groups;
  for (const auto& e : sorted) {
    if (groups.empty() || e.field - groups.back().back().field > line_merge) groups.emplace_back();
    groups.back().push_back(e);
  }
  std::vector<CrossingEvent> lines;
  for (const auto& g : groups) {
    const auto best = std::min_element(g.begin(), g.end(), [](const CrossingEvent& a, const CrossingEvent& b) {
      return a.min_gap < b.min_gap;
    });
    CrossingEvent line = *best;
    const std::size_t n = g.size();
    line.field = n % 2 == 1 ? g[n / 2].field : 0.5 * (g[n / 2 - 1].field + g[n / 2].field);
    line.bracket_lo = g.front().field;
    line.bracket_hi = g.back().field;
    for (const auto& e : g) line.projection_jump = std::max(line.projection_jump, e.projection_jump);
    lines.push_back(line);
  }

  std::vector<CrossingFeature> features;
  for (const auto& l : lines) {
    if (features.empty() || l.field - features.back().lines.back().field > cluster_radius) {
      features.emplace_back();
    }
    features.back().lines.push_back(l);
  }
  for (auto& f : features) {
    const std::size_t n = f.lines.size();
    f.span_lo = f.lines.front().field;
    f.span_hi = f.lines.back().field;
    f.center = n % 2 == 1 ? f.lines[n / 2].field : 0.5 * (f.lines[n / 2 - 1].field + f.lines[n / 2].field);
  }
  return features;
}

std::vector<CrossingFeature> find_features(const SpinSystemSpec& spec, const FeatureSearchOptions& options) {
  const SweepResult sr = sweep(spec, options.sweep);
  const std::vector<CrossingEvent> candidates = detect_events(sr, options.detection);
  const SpectrumEvaluator evaluator(spec, sr.zfs);
  const std::vector<CrossingEvent> refined =
      refine_all(evaluator, candidates, options.refine, options.sweep.threads);
  return cluster_features(refined, options.cluster_radius, options.line_merge);
}

namespace {

// Refined crossings inside [center - window, center + window] at one temperature.
std::vector<CrossingEvent> local_crossings(const SpinSystemSpec& spec, double temperature_k,
                                           const ThermalZfsModel& model, double center,
                                           const ShiftOptions& options) {
  SweepOptions so;
  so.field_min = std::max(0.0, center - options.window);
  so.field_max = center + options.window;
  so.points = std::max<std::size_t>(options.scan_points, 3);
  so.temperature_k = temperature_k;
  so.thermal = model;
  so.threads = options.threads;
  so.prescan_points = 2;
  const SweepResult sr = sweep(spec, so);
  const SpectrumEvaluator evaluator(spec, sr.zfs);
  RefineOptions ro;
  ro.resolution = options.resolution;
  return refine_all(evaluator, detect_events(sr, options.detection), ro, options.threads);
}

const CrossingEvent* nearest(const std::vector<CrossingEvent>& events, double field,
                             std::optional<std::size_t> level_hint) {
  const CrossingEvent* best = nullptr;
  for (const auto& e : events) {
    if (level_hint) {
      const auto d = static_cast<long long>(e.lower_level) - static_cast<long long>(*level_hint);
      if (d < -1 || d > 1) continue;
    }
    if (!best || std::abs(e.field - field) < std::abs(best->field - field)) best = &e;
  }
  return best;
}

}  // namespace

TemperatureShift temperature_shift(const SpinSystemSpec& spec, double seed_field,
                                   const std::vector<double>& temperatures, const ThermalZfsModel& model,
                                   const ShiftOptions& options) {
  if (!(options.window > 0.0) || !(options.slope_step > 0.0) || !(options.resolution > 0.0)) {
    throw InvalidInput("temperature-shift window, slope step and resolution must be positive");
  }
  if (options.reference_k - options.slope_step < 0.0) {
    throw InvalidInput("slope step reaches below 0 K");
  }
  for (double t : temperatures) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("temperatures must be finite and >= 0 K");
  }

  const double ref_t = options.reference_k;
  const auto at_ref = local_crossings(spec, ref_t, model, seed_field, options);
  const CrossingEvent* anchor = nearest(at_ref, seed_field, std::nullopt);
  if (!anchor) {
    throw NotFound("no crossing within " + std::to_string(options.window) + " G of " + std::to_string(seed_field) +
                   " G at the reference temperature");
  }

  TemperatureShift result;
  result.reference_center = anchor->field;
  result.lower_level = anchor->lower_level;

  std::vector<double> all = temperatures;
  all.push_back(ref_t - options.slope_step);
  all.push_back(ref_t + options.slope_step);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::map<double, TemperaturePoint> solved;
  solved[ref_t] = {ref_t, anchor->field, 0.0, true};

  auto continue_side = [&](auto begin, auto end) {
    double center = anchor->field;
    std::size_t level = anchor->lower_level;
    bool lost = false;
    for (auto it = begin; it != end; ++it) {
      const double t = *it;
      if (t == ref_t) continue;
      TemperaturePoint p{t, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), false};
      if (!lost) {
        const auto found = local_crossings(spec, t, model, center, options);
        if (const CrossingEvent* e = nearest(found, center, level)) {
          center = e->field;
          level = e->lower_level;
          p.center = center;
          p.delta = center - result.reference_center;
          p.found = true;
        } else {
          lost = true;
          result.lost = true;
        }
      }
      solved[t] = p;
    }
  };

  const auto split = std::lower_bound(all.begin(), all.end(), ref_t);
  continue_side(std::make_reverse_iterator(split), all.rend());
  continue_side(split, all.end());

  const auto& lo = solved.at(ref_t - options.slope_step);
  const auto& hi = solved.at(ref_t + options.slope_step);
  if (lo.found && hi.found) result.slope = (hi.center - lo.center) / (2.0 * options.slope_step);

  for (double t : temperatures) result.points.push_back(solved.at(t));
  return result;
}

}  // namespace spin_atlas
