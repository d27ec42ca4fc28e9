#include "spin_atlas/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/parallel.hpp"

namespace spin_atlas {

namespace {

Eigen::Vector3cd zero_projection_state(const Axis& axis) {
  const SpinOperators ops = spin_operators(3);
  const Vec3& n = axis.vector();
  const ComplexMatrix sn = n.x() * ops.x + n.y() * ops.y + n.z() * ops.z;
  const Eigen::Matrix3cd m = sn;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(m);
  // Eigenvalues are -1, 0, +1; the middle one is m_S = 0.
  Eigen::Vector3cd u = es.eigenvectors().col(1);
  // Fix the global phase on the largest component for determinism.
  Eigen::Index k = 0;
  u.cwiseAbs().maxCoeff(&k);
  u *= std::conj(u(k)) / std::abs(u(k));
  return u;
}

void average_degenerate(const Eigen::VectorXd& energies, Eigen::VectorXd& projections) {
  const Eigen::Index n = energies.size();
  if (n == 0) return;
  const double tol = 1e-8 * std::max(1.0, energies.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || energies(i) - energies(i - 1) > tol) {
      if (i - start > 1) {
        const double mean = projections.segment(start, i - start).mean();
        projections.segment(start, i - start).setConstant(mean);
      }
      start = i;
    }
  }
}

std::vector<std::vector<Eigen::Index>> invariant_blocks(const HamiltonianModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dimension());
  const double scale = std::max({max_abs(model.fixed_part()), max_abs(model.zfs_part()),
                                 max_abs(model.zeeman_part()), 1.0});
  const double cutoff = 1e-14 * scale;
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (std::abs(model.fixed_part()(i, j)) > cutoff || std::abs(model.zfs_part()(i, j)) > cutoff ||
          std::abs(model.zeeman_part()(i, j)) > cutoff) {
        const Eigen::Index a = find(i);
        const Eigen::Index b = find(j);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return blocks;
}

// Diagonalizes each invariant block and merges the spectra in ascending
// order; ties keep block order so the result is deterministic.
template <typename Matrix>
void solve_blocks(const Matrix& h, const std::vector<std::vector<Eigen::Index>>& blocks, bool want_vectors,
                  Eigen::VectorXd& values, Matrix* vectors) {
  const Eigen::Index n = h.rows();
  if (blocks.size() == 1) {
    if (want_vectors) {
      auto ed = eigendecompose(h);
      values = std::move(ed.values);
      *vectors = std::move(ed.vectors);
    } else {
      values = eigenvalues(h);
    }
    return;
  }
  struct Level {
    double value;
    std::size_t block;
    Eigen::Index column;
  };
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(n));
  std::vector<Matrix> block_vectors(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix sub = h(blocks[b], blocks[b]);
    Eigen::VectorXd w;
    if (want_vectors) {
      auto ed = eigendecompose(sub);
      w = std::move(ed.values);
      block_vectors[b] = std::move(ed.vectors);
    } else {
      w = eigenvalues(sub);
    }
    for (Eigen::Index k = 0; k < w.size(); ++k) levels.push_back({w(k), b, k});
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.value < b.value; });
  values.resize(n);
  if (want_vectors) vectors->setZero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Level& l = levels[static_cast<std::size_t>(k)];
    values(k) = l.value;
    if (want_vectors) {
      const auto& idx = blocks[l.block];
      for (std::size_t r = 0; r < idx.size(); ++r) {
        (*vectors)(idx[r], k) = block_vectors[l.block](static_cast<Eigen::Index>(r), l.column);
      }
    }
  }
}

}  // namespace

SpectrumEvaluator::SpectrumEvaluator(const SpinSystemSpec& spec, double zfs_mhz)
    : model_(spec), zfs_(zfs_mhz) {
  if (!(zfs_mhz > 0.0)) throw InvalidInput("zero-field splitting D must be > 0 MHz");
  probe_state_ = zero_projection_state(spec.sites[spec.probe_site].axis);
  const auto dims = spec.dims();
  for (std::size_t k = 0; k < spec.probe_site; ++k) left_ *= dims[k];
  for (std::size_t k = spec.probe_site + 1; k < dims.size(); ++k) right_ *= dims[k];
  blocks_ = invariant_blocks(model_);
}

Eigen::VectorXd SpectrumEvaluator::energies(double field) const {
  Eigen::VectorXd values;
  if (model_.is_real()) {
    solve_blocks<RealMatrix>(model_.real_at(field, zfs_), blocks_, false, values, nullptr);
  } else {
    solve_blocks<ComplexMatrix>(model_.at(field, zfs_), blocks_, false, values, nullptr);
  }
  return values;
}

Eigen::VectorXd SpectrumEvaluator::project(const ComplexMatrix& vectors) const {
  const Eigen::Index n = vectors.cols();
  Eigen::VectorXd p(n);
  const Eigen::Vector3cd u = probe_state_.conjugate();
  for (Eigen::Index col = 0; col < n; ++col) {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < left_; ++l) {
      const Eigen::Index base = l * 3 * right_;
      for (Eigen::Index r = 0; r < right_; ++r) {
        const Complex amp = u(0) * vectors(base + r, col) + u(1) * vectors(base + right_ + r, col) +
                            u(2) * vectors(base + 2 * right_ + r, col);
        acc += std::norm(amp);
      }
    }
    p(col) = acc;
  }
  return p;
}

Eigen::VectorXd SpectrumEvaluator::project(const RealMatrix& vectors) const {
  const Eigen::Index n = vectors.cols();
  Eigen::VectorXd p(n);
  const Eigen::Vector3cd u = probe_state_.conjugate();
  for (Eigen::Index col = 0; col < n; ++col) {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < left_; ++l) {
      const Eigen::Index base = l * 3 * right_;
      for (Eigen::Index r = 0; r < right_; ++r) {
        const Complex amp = u(0) * vectors(base + r, col) + u(1) * vectors(base + right_ + r, col) +
                            u(2) * vectors(base + 2 * right_ + r, col);
        acc += std::norm(amp);
      }
    }
    p(col) = acc;
  }
  return p;
}

EigenDecomposition SpectrumEvaluator::decompose(double field) const {
  EigenDecomposition out;
  if (model_.is_real()) {
    RealMatrix vectors;
    solve_blocks<RealMatrix>(model_.real_at(field, zfs_), blocks_, true, out.values, &vectors);
    out.vectors = vectors.cast<Complex>();
  } else {
    solve_blocks<ComplexMatrix>(model_.at(field, zfs_), blocks_, true, out.values, &out.vectors);
  }
  return out;
}

PointSpectrum SpectrumEvaluator::spectrum(double field, bool keep_vectors) const {
  PointSpectrum out;
  out.field = field;
  if (model_.is_real()) {
    RealMatrix vectors;
    solve_blocks<RealMatrix>(model_.real_at(field, zfs_), blocks_, true, out.energies, &vectors);
    out.projections = project(vectors);
    if (keep_vectors) out.vectors = vectors.cast<Complex>();
  } else {
    ComplexMatrix vectors;
    solve_blocks<ComplexMatrix>(model_.at(field, zfs_), blocks_, true, out.energies, &vectors);
    out.projections = project(vectors);
    if (keep_vectors) out.vectors = std::move(vectors);
  }
  out.projections = out.projections.cwiseMax(0.0).cwiseMin(1.0);
  average_degenerate(out.energies, out.projections);
  return out;
}

std::vector<double> field_grid(double field_min, double field_max, std::size_t points) {
  if (!(field_min < field_max) || !std::isfinite(field_min) || !std::isfinite(field_max)) {
    throw InvalidInput("field range requires finite B_min < B_max");
  }
  if (field_min < 0.0) throw InvalidInput("field range must be non-negative");
  if (points < 2) throw InvalidInput("sweep needs at least 2 points");
  std::vector<double> grid(points);
  const double step = (field_max - field_min) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = field_min + step * static_cast<double>(k);
  grid.back() = field_max;
  return grid;
}

SweepResult sweep(const SpinSystemSpec& spec, const SweepOptions& options) {
  const std::vector<double> grid = field_grid(options.field_min, options.field_max, options.points);
  const double zfs = zfs_at(options.thermal, options.temperature_k);
  const SpectrumEvaluator evaluator(spec, zfs);
  const unsigned threads = resolve_threads(options.threads);
  const bool keep_vectors = options.keep_vectors && evaluator.dimension() < kVectorRetentionCap;

  // Positivity shift from a coarse eigenvalue-only pre-scan.
  const std::size_t coarse_n = std::max<std::size_t>(2, options.prescan_points);
  const std::vector<double> coarse = field_grid(options.field_min, options.field_max, coarse_n);
  std::vector<double> coarse_min(coarse.size());
  parallel_for(coarse.size(), threads, [&](std::size_t k) { coarse_min[k] = evaluator.energies(coarse[k])(0); });
  const double lowest = *std::min_element(coarse_min.begin(), coarse_min.end());
  double shift = std::abs(lowest) + 100.0;

  SweepResult result;
  result.fields = grid;
  result.dimension = evaluator.dimension();
  result.zfs = zfs;
  result.temperature_k = options.temperature_k;
  result.eigenvalues.resize(grid.size());
  result.projections.resize(grid.size());
  if (keep_vectors) result.vectors.resize(grid.size());

  parallel_for(grid.size(), threads, [&](std::size_t k) {
    PointSpectrum s = evaluator.spectrum(grid[k], keep_vectors);
    result.eigenvalues[k] = std::move(s.energies);
    result.projections[k] = std::move(s.projections);
    if (keep_vectors) result.vectors[k] = std::move(*s.vectors);
  });

  // The linear-in-B spectrum cannot dip far between coarse points, but keep
  // the documented guarantee exact.
  double overall_min = std::numeric_limits<double>::infinity();
  for (const auto& e : result.eigenvalues) overall_min = std::min(overall_min, e(0));
  if (overall_min + shift <= 0.0) shift = std::abs(overall_min) + 100.0;
  for (auto& e : result.eigenvalues) e.array() += shift;
  result.shift = shift;
  return result;
}

}  // namespace spin_atlas
