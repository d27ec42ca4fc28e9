#include "spin_atlas/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse number '" + t + "'");
  }
  return value;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

}  // namespace

void Trace::validate() const {
  if (field.size() != pl.size()) {
    throw LengthMismatch("trace has " + std::to_string(field.size()) + " field values but " +
                         std::to_string(pl.size()) + " pl values");
  }
  if (field.size() < kMinTracePoints) {
    throw InvalidInput("trace needs at least " + std::to_string(kMinTracePoints) + " points, got " +
                       std::to_string(field.size()));
  }
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (!std::isfinite(field[k]) || !std::isfinite(pl[k])) throw InvalidInput("trace contains non-finite values");
    if (k > 0 && !(field[k] > field[k - 1])) {
      throw NonMonotonicField("field must be strictly increasing (row " + std::to_string(k + 1) + ": " +
                              std::to_string(field[k]) + " after " + std::to_string(field[k - 1]) + ")");
    }
  }
}

Trace parse_trace(std::istream& in) {
  static const std::regex temperature_re(R"(^#\s*temperature_K\s*=\s*(\S+)\s*$)");
  Trace trace;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::smatch m;
      if (std::regex_match(text, m, temperature_re)) trace.temperature_k = parse_number(m[1].str(), line);
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(text);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(trim(col));
    if (text.back() == ',') cols.emplace_back();
    if (!header_seen) {
      if (cols.size() != 2 || cols[0] != "B_gauss" || cols[1] != "pl") {
        throw ParseError("line " + std::to_string(line) + ": expected header 'B_gauss,pl'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 2) {
      throw LengthMismatch("line " + std::to_string(line) + ": expected 2 columns, got " +
                           std::to_string(cols.size()));
    }
    trace.field.push_back(parse_number(cols[0], line));
    trace.pl.push_back(parse_number(cols[1], line));
  }
  if (!header_seen) throw ParseError("trace is empty; expected header 'B_gauss,pl'");
  trace.validate();
  return trace;
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file '" + path.string() + "'");
  return parse_trace(in);
}

double DipFit::model(double field) const {
  double dip = 0.0;
  for (const auto& d : dips) {
    const double x = field - d.center;
    dip += d.depth * d.hwhm * d.hwhm / (x * x + d.hwhm * d.hwhm);
  }
  return (baseline_offset + baseline_slope * field) * (1.0 - dip);
}

namespace {

// Internal problem in centered field coordinates and normalized pl so the
// normal equations stay well conditioned for any units.
struct Problem {
  Eigen::VectorXd x;  // field - origin
  Eigen::VectorXd y;  // pl / scale
  double origin = 0.0;
  double scale = 1.0;
  double spacing = 1.0;
};

Problem make_problem(const Trace& trace) {
  trace.validate();
  Problem p;
  const std::size_t n = trace.size();
  p.origin = 0.5 * (trace.field.front() + trace.field.back());
  double s = 0.0;
  for (double v : trace.pl) s += std::abs(v);
  p.scale = s > 0.0 ? s / static_cast<double>(n) : 1.0;
  p.x.resize(static_cast<Eigen::Index>(n));
  p.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    p.x(static_cast<Eigen::Index>(k)) = trace.field[k] - p.origin;
    p.y(static_cast<Eigen::Index>(k)) = trace.pl[k] / p.scale;
  }
  p.spacing = (trace.field.back() - trace.field.front()) / static_cast<double>(n - 1);
  return p;
}

// theta = [a, b, c0, w0, d0, c1, w1, d1, ...]
Eigen::VectorXd evaluate(const Problem& p, const Eigen::VectorXd& theta) {
  const Eigen::Index dips = (theta.size() - 2) / 3;
  Eigen::VectorXd out(p.x.size());
  for (Eigen::Index k = 0; k < p.x.size(); ++k) {
    double dip = 0.0;
    for (Eigen::Index j = 0; j < dips; ++j) {
      const double c = theta(2 + 3 * j);
      const double w = theta(3 + 3 * j);
      const double d = theta(4 + 3 * j);
      const double u = p.x(k) - c;
      dip += d * w * w / (u * u + w * w);
    }
    out(k) = (theta(0) + theta(1) * p.x(k)) * (1.0 - dip);
  }
  return out;
}

Eigen::MatrixXd jacobian(const Problem& p, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd J(p.x.size(), theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double h = 1e-6 * std::max(std::abs(theta(j)), 1e-3);
    Eigen::VectorXd up = theta;
    Eigen::VectorXd dn = theta;
    up(j) += h;
    dn(j) -= h;
    J.col(j) = (evaluate(p, up) - evaluate(p, dn)) / (2.0 * h);
  }
  return J;
}

void constrain(Eigen::VectorXd& theta, double spacing) {
  const Eigen::Index dips = (theta.size() - 2) / 3;
  for (Eigen::Index j = 0; j < dips; ++j) {
    theta(3 + 3 * j) = std::max(std::abs(theta(3 + 3 * j)), 1e-6 * spacing);
    theta(4 + 3 * j) = std::clamp(theta(4 + 3 * j), 0.0, 0.999);
  }
}

struct Baseline {
  double a = 0.0;
  double b = 0.0;
};

// Linear baseline that ignores points sitting well below it (dips).
Baseline robust_baseline(const Problem& p) {
  std::vector<bool> keep(static_cast<std::size_t>(p.x.size()), true);
  Baseline bl;
  for (int pass = 0; pass < 4; ++pass) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (Eigen::Index k = 0; k < p.x.size(); ++k) {
      if (!keep[static_cast<std::size_t>(k)]) continue;
      sx += p.x(k);
      sy += p.y(k);
      sxx += p.x(k) * p.x(k);
      sxy += p.x(k) * p.y(k);
      n += 1;
    }
    const double det = n * sxx - sx * sx;
    bl.b = det > 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    bl.a = n > 0 ? (sy - bl.b * sx) / n : 1.0;
    std::vector<double> res(static_cast<std::size_t>(p.x.size()));
    for (Eigen::Index k = 0; k < p.x.size(); ++k) res[static_cast<std::size_t>(k)] = p.y(k) - (bl.a + bl.b * p.x(k));
    const double med = median(res);
    std::vector<double> dev(res.size());
    for (std::size_t k = 0; k < res.size(); ++k) dev[k] = std::abs(res[k] - med);
    const double mad = 1.4826 * median(dev);
    for (std::size_t k = 0; k < res.size(); ++k) keep[k] = res[k] > med - 3.0 * mad;
  }
  return bl;
}

std::vector<Dip> unpack(const Problem& p, const Eigen::VectorXd& theta) {
  std::vector<Dip> dips;
  for (Eigen::Index j = 0; j < (theta.size() - 2) / 3; ++j) {
    Dip d;
    d.center = theta(2 + 3 * j) + p.origin;
    d.hwhm = theta(3 + 3 * j);
    d.depth = theta(4 + 3 * j);
    dips.push_back(d);
  }
  return dips;
}

DipFit solve(const Problem& p, Eigen::VectorXd theta, const FitOptions& options) {
  const Eigen::Index np = theta.size();
  const auto m = p.x.size();
  if (m <= np) throw InvalidInput("trace has too few points for the requested number of dips");
  constrain(theta, p.spacing);
  Eigen::VectorXd r = evaluate(p, theta) - p.y;
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  DipFit fit;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    fit.iterations = it + 1;
    const Eigen::MatrixXd J = jacobian(p, theta);
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const double diag_floor = 1e-12 * std::max(1.0, A.diagonal().maxCoeff());
    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd damped = A;
      for (Eigen::Index j = 0; j < np; ++j) damped(j, j) += lambda * std::max(A(j, j), diag_floor);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Eigen::VectorXd trial = theta + step;
      constrain(trial, p.spacing);
      const Eigen::VectorXd rt = evaluate(p, trial) - p.y;
      const double ct = rt.squaredNorm();
      if (ct <= cost) {
        const double change = (trial - theta).norm();
        const double size = theta.norm();
        theta = trial;
        r = rt;
        cost = ct;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (change <= options.tolerance * (size + options.tolerance)) fit.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    // No downhill step at any damping: already at the numerical minimum.
    if (!accepted) fit.converged = true;
    if (fit.converged) break;
  }

  fit.dips = unpack(p, theta);
  fit.baseline_slope = theta(1) * p.scale;
  fit.baseline_offset = (theta(0) - theta(1) * p.origin) * p.scale;
  fit.residual_rms = std::sqrt(cost / static_cast<double>(m)) * p.scale;

  // Covariance from the active parameters; zero-depth dips carry no center
  // or width information and are flagged instead.
  const Eigen::MatrixXd J = jacobian(p, theta);
  std::vector<Eigen::Index> active = {0, 1};
  const double depth_floor = 1e-6;
  for (std::size_t j = 0; j < fit.dips.size(); ++j) {
    const auto base = static_cast<Eigen::Index>(2 + 3 * j);
    if (fit.dips[j].depth > depth_floor) {
      active.insert(active.end(), {base, base + 1, base + 2});
    } else {
      active.push_back(base + 2);
      fit.dips[j].removable = true;
    }
  }
  Eigen::MatrixXd Ja(m, static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c) Ja.col(static_cast<Eigen::Index>(c)) = J.col(active[c]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ja);
  qr.setThreshold(1e-10);
  if (qr.rank() < Ja.cols()) {
    throw NumericalError("singular Jacobian in dip fit; try fewer dips or more separated seeds");
  }
  const double dof = static_cast<double>(m - Ja.cols());
  const double sigma2 = dof > 0 ? cost / dof : 0.0;
  const Eigen::MatrixXd cov = sigma2 * (Ja.transpose() * Ja).inverse();
  for (std::size_t c = 0; c < active.size(); ++c) {
    const Eigen::Index idx = active[c];
    if (idx < 2) continue;
    const auto j = static_cast<std::size_t>((idx - 2) / 3);
    const double err = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c))));
    switch ((idx - 2) % 3) {
      case 0: fit.dips[j].center_err = err; break;
      case 1: fit.dips[j].hwhm_err = err; break;
      default: fit.dips[j].depth_err = err; break;
    }
  }
  for (auto& d : fit.dips) {
    if (d.depth <= depth_floor || d.depth < 2.0 * d.depth_err) d.removable = true;
  }
  std::sort(fit.dips.begin(), fit.dips.end(), [](const Dip& a, const Dip& b) { return a.center < b.center; });
  return fit;
}

}  // namespace

std::vector<double> auto_seeds(const Trace& trace, double prominence_factor) {
  const Problem p = make_problem(trace);
  const Baseline bl = robust_baseline(p);
  const Eigen::Index n = p.x.size();
  std::vector<double> r(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double base = bl.a + bl.b * p.x(k);
    r[static_cast<std::size_t>(k)] = base != 0.0 ? p.y(k) / base - 1.0 : 0.0;
  }
  const double med = median(r);
  // Noise from first differences: dip tails shift the plain MAD, differences
  // of a smooth signal stay near zero.
  std::vector<double> diff(r.size() - 1);
  for (std::size_t k = 0; k + 1 < r.size(); ++k) diff[k] = r[k + 1] - r[k];
  const double dmed = median(diff);
  for (auto& d : diff) d = std::abs(d - dmed);
  const double noise = std::max(1.4826 * median(diff) / std::sqrt(2.0), 1e-12);

  // Light smoothing keeps single noisy samples from forming minima.
  const auto half = static_cast<std::ptrdiff_t>(std::max<Eigen::Index>(1, n / 400));
  std::vector<double> s(r.size());
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(r.size()); ++k) {
    const auto lo = std::max<std::ptrdiff_t>(0, k - half);
    const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(r.size()) - 1, k + half);
    double acc = 0.0;
    for (auto j = lo; j <= hi; ++j) acc += r[static_cast<std::size_t>(j)];
    s[static_cast<std::size_t>(k)] = acc / static_cast<double>(hi - lo + 1);
  }

  const double threshold = prominence_factor * noise;
  std::vector<double> seeds;
  const std::size_t len = s.size();
  for (std::size_t k = 1; k + 1 < len; ++k) {
    if (!(s[k] < s[k - 1] && s[k] <= s[k + 1])) continue;
    if (-(s[k] - med) <= threshold) continue;
    double left = s[k];
    for (std::size_t j = k; j-- > 0;) {
      if (s[j] < s[k]) break;
      left = std::max(left, s[j]);
    }
    double right = s[k];
    for (std::size_t j = k + 1; j < len; ++j) {
      if (s[j] < s[k]) break;
      right = std::max(right, s[j]);
    }
    if (std::min(left, right) - s[k] > threshold) seeds.push_back(trace.field[k]);
  }
  return seeds;
}

DipFit fit_dips(const Trace& trace, const std::vector<double>& seeds, const FitOptions& options) {
  const Problem p = make_problem(trace);
  std::vector<double> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (!std::isfinite(sorted[j]) || sorted[j] < trace.field.front() || sorted[j] > trace.field.back()) {
      throw InvalidInput("seed " + std::to_string(sorted[j]) + " G lies outside the trace field range");
    }
    if (j > 0 && sorted[j] - sorted[j - 1] < 2.0 * p.spacing) {
      throw InvalidInput("seeds " + std::to_string(sorted[j - 1]) + " and " + std::to_string(sorted[j]) +
                         " G are closer than two grid spacings");
    }
  }

  const Baseline bl = robust_baseline(p);
  Eigen::VectorXd theta(2 + 3 * static_cast<Eigen::Index>(sorted.size()));
  theta(0) = bl.a;
  theta(1) = bl.b;
  const auto n = static_cast<std::ptrdiff_t>(p.x.size());
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const double c = sorted[j] - p.origin;
    const auto it = std::lower_bound(trace.field.begin(), trace.field.end(), sorted[j]);
    const std::ptrdiff_t k0 = std::clamp<std::ptrdiff_t>(it - trace.field.begin(), 0, n - 1);
    const double base = bl.a + bl.b * c;
    double lowest = p.y(k0);
    for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, k0 - 2); k <= std::min(n - 1, k0 + 2); ++k) {
      lowest = std::min(lowest, p.y(k));
    }
    const double depth = std::clamp(base != 0.0 ? 1.0 - lowest / base : 0.0, 1e-6, 0.9);
    const double half_level = base * (1.0 - depth / 2.0);
    std::ptrdiff_t kl = k0;
    while (kl > 0 && p.y(kl) < half_level) --kl;
    std::ptrdiff_t kr = k0;
    while (kr < n - 1 && p.y(kr) < half_level) ++kr;
    const double width = std::max(0.5 * (p.x(kr) - p.x(kl)), 2.0 * p.spacing);
    const auto b = static_cast<Eigen::Index>(2 + 3 * j);
    theta(b) = c;
    theta(b + 1) = width;
    theta(b + 2) = depth;
  }
  return solve(p, theta, options);
}

DipFit refit(const Trace& trace, const DipFit& start, const FitOptions& options) {
  const Problem p = make_problem(trace);
  Eigen::VectorXd theta(2 + 3 * static_cast<Eigen::Index>(start.dips.size()));
  theta(1) = start.baseline_slope / p.scale;
  theta(0) = start.baseline_offset / p.scale + theta(1) * p.origin;
  for (std::size_t j = 0; j < start.dips.size(); ++j) {
    const auto b = static_cast<Eigen::Index>(2 + 3 * j);
    theta(b) = start.dips[j].center - p.origin;
    theta(b + 1) = start.dips[j].hwhm;
    theta(b + 2) = start.dips[j].depth;
  }
  return solve(p, theta, options);
}

std::vector<double> side_peak_separations(const DipFit& fit, double central) {
  std::vector<double> out;
  if (fit.dips.size() < 2) return out;
  std::size_t centre_idx = 0;
  for (std::size_t j = 1; j < fit.dips.size(); ++j) {
    if (std::abs(fit.dips[j].center - central) < std::abs(fit.dips[centre_idx].center - central)) centre_idx = j;
  }
  for (std::size_t j = 0; j < fit.dips.size(); ++j) {
    if (j != centre_idx) out.push_back(std::abs(fit.dips[j].center - central));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spin_atlas
