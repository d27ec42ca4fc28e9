#include "spin_atlas/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <Eigen/SparseCore>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/parallel.hpp"

namespace spin_atlas {

std::string_view to_string(CrossingKind kind) {
  return kind == CrossingKind::True ? "true" : "avoided";
}

namespace {

bool event_order(const CrossingEvent& a, const CrossingEvent& b) {
  if (a.field != b.field) return a.field < b.field;
  return a.lower_level < b.lower_level;
}

double gap_at(const SpectrumEvaluator& evaluator, std::size_t lower, double field) {
  const Eigen::VectorXd e = evaluator.energies(field);
  return std::max(0.0, e(static_cast<Eigen::Index>(lower) + 1) - e(static_cast<Eigen::Index>(lower)));
}

}  // namespace

std::vector<CrossingEvent> detect_events(const SweepResult& sweep, const DetectionOptions& options) {
  std::vector<CrossingEvent> events;
  const std::size_t n = sweep.size();
  if (n < 2 || sweep.dimension < 2) return events;
  const auto levels = static_cast<Eigen::Index>(sweep.dimension);
  const auto& B = sweep.fields;
  const auto& E = sweep.eigenvalues;
  const auto& P = sweep.projections;

  const double spacing = (B.back() - B.front()) / static_cast<double>(n - 1);
  const auto max_steps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(options.transfer_window / spacing)));
  auto gap = [&](std::size_t k, Eigen::Index i) { return E[k](i + 1) - E[k](i); };

  // Gap minima with a projection transfer across their basin. A minimum on the
  // window edge only counts at zero field, where the spectrum is symmetric.
  for (Eigen::Index i = 0; i + 1 < levels; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double g = gap(k, i);
      const bool left_ok = k == 0 ? B[0] == 0.0 : g <= gap(k - 1, i);
      const bool right_ok = k != n - 1 && g < gap(k + 1, i);
      if (!left_ok || !right_ok || g >= options.gap_ceiling) continue;
      std::size_t kl = k;
      while (kl > 0 && k - kl < max_steps && gap(kl - 1, i) >= gap(kl, i)) --kl;
      std::size_t kr = k;
      while (kr + 1 < n && kr - k < max_steps && gap(kr + 1, i) >= gap(kr, i)) ++kr;
      const double transfer =
          std::max(std::abs(P[kr](i) - P[kl](i)), std::abs(P[kr](i + 1) - P[kl](i + 1)));
      if (transfer <= options.transfer_threshold) continue;
      CrossingEvent ev;
      ev.field = B[k];
      ev.bracket_lo = B[k == 0 ? 0 : k - 1];
      ev.bracket_hi = B[std::min(k + 1, n - 1)];
      ev.lower_level = static_cast<std::size_t>(i);
      ev.min_gap = std::max(0.0, g);
      ev.projection_jump = transfer;
      events.push_back(ev);
    }
  }

  // Sharp projection jumps not already explained by a gap minimum.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (Eigen::Index i = 0; i < levels; ++i) {
      const double jump = std::abs(P[k + 1](i) - P[k](i));
      if (jump <= options.jump_threshold) continue;
      Eigen::Index lower = -1;
      double best = 0.0;
      for (Eigen::Index cand : {i - 1, i}) {
        if (cand < 0 || cand + 1 >= levels) continue;
        const double g = std::min(gap(k, cand), gap(k + 1, cand));
        if (lower < 0 || g < best) {
          lower = cand;
          best = g;
        }
      }
      if (lower < 0) continue;
      const double lo = B[k == 0 ? 0 : k - 1];
      const double hi = B[std::min(k + 2, n - 1)];
      auto same = std::find_if(events.begin(), events.end(), [&](const CrossingEvent& e) {
        return e.lower_level == static_cast<std::size_t>(lower) && e.field >= lo && e.field <= hi;
      });
      if (same != events.end()) {
        same->projection_jump = std::max(same->projection_jump, jump);
        continue;
      }
      CrossingEvent ev;
      ev.field = gap(k, lower) <= gap(k + 1, lower) ? B[k] : B[k + 1];
      ev.bracket_lo = lo;
      ev.bracket_hi = hi;
      ev.lower_level = static_cast<std::size_t>(lower);
      ev.min_gap = std::max(0.0, best);
      ev.projection_jump = jump;
      events.push_back(ev);
    }
  }

  std::sort(events.begin(), events.end(), event_order);
  return events;
}

namespace {

using GapFunction = std::function<double(double)>;

GapMinimum golden_minimum(const GapFunction& gap, double lo, double hi, double tolerance) {
  constexpr double kInvPhi = 0.6180339887498949;
  GapMinimum best{lo, gap(lo)};
  auto consider = [&](double x, double g) {
    if (g < best.gap) best = {x, g};
  };
  consider(hi, gap(hi));
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = gap(c);
  double gd = gap(d);
  consider(c, gc);
  consider(d, gd);
  while (b - a > tolerance) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = gap(c);
      consider(c, gc);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = gap(d);
      consider(d, gd);
    }
  }
  // A true crossing is a V: extend both arms and try their intersection.
  const double h = tolerance;
  const double x = best.field;
  if (x - 2.0 * h >= lo && x + 2.0 * h <= hi) {
    const double gl1 = gap(x - h), gl2 = gap(x - 2.0 * h);
    const double gr1 = gap(x + h), gr2 = gap(x + 2.0 * h);
    const double sl = (gl1 - gl2) / h;
    const double sr = (gr2 - gr1) / h;
    if (sl < 0.0 && sr > 0.0) {
      // gl1 + sl*(t - (x-h)) == gr1 + sr*(t - (x+h))
      const double t = (gr1 - gl1 + sl * (x - h) - sr * (x + h)) / (sl - sr);
      if (t > x - h && t < x + h) consider(t, gap(t));
    }
  }
  return best;
}

// Samples the bracket, runs a golden-section search from every sampled local
// minimum and reports each distinct minimum. `final_gap` re-evaluates the gap
// at the located field (the full model when `gap` is a surrogate).
std::vector<CrossingEvent> refine_with(const GapFunction& gap, const GapFunction& final_gap,
                                       const CrossingEvent& event, const RefineOptions& options) {
  if (!(event.bracket_lo <= event.bracket_hi) || event.bracket_lo < 0.0) {
    throw InvalidInput("crossing event has an invalid bracket");
  }
  if (!(options.resolution > 0.0)) throw InvalidInput("refinement resolution must be positive");
  const double lo = event.bracket_lo;
  const double hi = event.bracket_hi;
  const double tolerance = options.resolution / 10.0;
  const std::size_t m = std::max<std::size_t>(3, options.bracket_samples);

  std::vector<double> xs(m);
  std::vector<double> gs(m);
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m - 1);
    gs[j] = gap(xs[j]);
  }

  std::vector<CrossingEvent> out;
  for (std::size_t j = 0; j < m; ++j) {
    const bool left_ok = j == 0 || gs[j] <= gs[j - 1];
    const bool right_ok = j == m - 1 || gs[j] < gs[j + 1];
    if (!left_ok || !right_ok) continue;
    const double a = xs[j == 0 ? 0 : j - 1];
    const double b = xs[std::min(j + 1, m - 1)];
    const GapMinimum best = golden_minimum(gap, a, b, tolerance);
    if (!out.empty() && std::abs(out.back().field - best.field) < options.resolution) {
      if (best.gap < out.back().min_gap) {
        out.back().field = best.field;
        out.back().min_gap = best.gap;
      }
      continue;
    }
    CrossingEvent refined = event;
    refined.field = best.field;
    refined.min_gap = best.gap;
    refined.bracket_lo = a;
    refined.bracket_hi = b;
    refined.refined = true;
    out.push_back(refined);
  }
  for (auto& e : out) {
    if (&final_gap != &gap) e.min_gap = final_gap(e.field);
    e.kind = e.min_gap < options.true_gap ? CrossingKind::True : CrossingKind::Avoided;
  }
  return out;
}

// Reduced model around one grid point: H(B) restricted to the eigenvectors of
// levels [first, first + size) at B = center. Exact at the center, and since
// H is linear in B the only error comes from couplings to levels outside the
// window, which are far away in energy.
class ReducedModel {
 public:
  ReducedModel(const EigenDecomposition& ed, const Eigen::SparseMatrix<Complex>& zeeman, double center,
               std::size_t first, std::size_t size)
      : center_(center), first_(first) {
    const auto f = static_cast<Eigen::Index>(first);
    const auto r = static_cast<Eigen::Index>(size);
    const ComplexMatrix p = ed.vectors.middleCols(f, r);
    zeeman_ = p.adjoint() * (zeeman * p);
    zeeman_ = (0.5 * (zeeman_ + zeeman_.adjoint())).eval();
    energies_ = ed.values.segment(f, r);
  }

  double gap(std::size_t lower, double field) const {
    ComplexMatrix h = (field - center_) * zeeman_;
    h.diagonal().real() += energies_;
    const Eigen::VectorXd w = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
    const auto k = static_cast<Eigen::Index>(lower - first_);
    return std::max(0.0, w(k + 1) - w(k));
  }

 private:
  double center_;
  std::size_t first_;
  ComplexMatrix zeeman_;
  Eigen::VectorXd energies_;
};

}  // namespace

GapMinimum minimize_gap(const SpectrumEvaluator& evaluator, std::size_t lower, double lo, double hi,
                        double tolerance) {
  if (lower + 1 >= evaluator.dimension()) throw InvalidInput("level index out of range for gap search");
  if (!(lo <= hi)) throw InvalidInput("gap search bracket is empty");
  if (!(tolerance > 0.0)) throw InvalidInput("gap search tolerance must be positive");
  return golden_minimum([&](double b) { return gap_at(evaluator, lower, b); }, lo, hi, tolerance);
}

std::vector<CrossingEvent> refine_and_classify(const SpectrumEvaluator& evaluator, const CrossingEvent& event,
                                               const RefineOptions& options) {
  if (event.lower_level + 1 >= evaluator.dimension()) throw InvalidInput("level index out of range for refinement");
  const GapFunction gap = [&](double b) { return gap_at(evaluator, event.lower_level, b); };
  return refine_with(gap, gap, event, options);
}

std::vector<CrossingEvent> refine_and_classify(const SpinSystemSpec& spec, const CrossingEvent& event,
                                               double temperature_k, const ThermalZfsModel& model,
                                               const RefineOptions& options) {
  const SpectrumEvaluator evaluator(spec, zfs_at(model, temperature_k));
  return refine_and_classify(evaluator, event, options);
}

std::vector<CrossingEvent> refine_all(const SpectrumEvaluator& evaluator, const std::vector<CrossingEvent>& events,
                                      const RefineOptions& options, unsigned threads) {
  const unsigned workers = resolve_threads(threads);
  std::vector<std::vector<CrossingEvent>> parts(events.size());
  const std::size_t n = evaluator.dimension();
  for (const auto& e : events) {
    if (e.lower_level + 1 >= n) throw InvalidInput("level index out of range for refinement");
  }

  if (n <= options.surrogate_min_dimension) {
    parallel_for(events.size(), workers,
                 [&](std::size_t k) { parts[k] = refine_and_classify(evaluator, events[k], options); });
  } else {
    // One full decomposition per distinct grid field, shared by its events.
    std::vector<double> centers;
    for (const auto& e : events) centers.push_back(e.field);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    // The Zeeman part is nearly diagonal in the product basis.
    const Eigen::SparseMatrix<Complex> zeeman = evaluator.model().zeeman_part().sparseView();
    parallel_for(centers.size(), workers, [&](std::size_t c) {
      const double center = centers[c];
      const EigenDecomposition ed = evaluator.decompose(center);
      for (std::size_t k = 0; k < events.size(); ++k) {
        if (events[k].field != center) continue;
        const std::size_t lower = events[k].lower_level;
        auto window = [&](std::size_t margin) {
          const std::size_t first = lower > margin ? lower - margin : 0;
          const std::size_t last = std::min(n - 1, lower + 1 + margin);
          return ReducedModel(ed, zeeman, center, first, last - first + 1);
        };
        const ReducedModel reduced = window(options.surrogate_margin);
        const GapFunction surrogate = [&](double b) { return reduced.gap(lower, b); };
        GapFunction exact = [&](double b) { return gap_at(evaluator, lower, b); };
        std::optional<ReducedModel> wide;
        if (options.final_margin > 0 && 2 * options.final_margin + 2 < n) {
          wide.emplace(window(options.final_margin));
          exact = [&](double b) { return wide->gap(lower, b); };
        }
        parts[k] = refine_with(surrogate, exact, events[k], options);
      }
    });
  }

  std::vector<CrossingEvent> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), [](const CrossingEvent& a, const CrossingEvent& b) {
    if (a.lower_level != b.lower_level) return a.lower_level < b.lower_level;
    return a.field < b.field;
  });
  std::vector<CrossingEvent> merged;
  for (const auto& e : all) {
    if (!merged.empty() && merged.back().lower_level == e.lower_level &&
        std::abs(merged.back().field - e.field) < options.resolution) {
      auto& kept = merged.back();
      kept.projection_jump = std::max(kept.projection_jump, e.projection_jump);
      if (e.min_gap < kept.min_gap) {
        kept.field = e.field;
        kept.min_gap = e.min_gap;
        kept.kind = e.kind;
      }
      continue;
    }
    merged.push_back(e);
  }
  std::sort(merged.begin(), merged.end(), event_order);
  return merged;
}

}  // namespace spin_atlas
