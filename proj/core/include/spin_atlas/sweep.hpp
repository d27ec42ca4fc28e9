#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "spin_atlas/eigensolver.hpp"
#include "spin_atlas/hamiltonian.hpp"
#include "spin_atlas/spin_system.hpp"
#include "spin_atlas/thermal.hpp"

namespace spin_atlas {

/// Spectrum at a single field value. Energies are unshifted and ascending;
/// projections[i] = ||P0 psi_i||^2 where P0 projects onto the probe NV's
/// m_S = 0 state (in its own axis frame) times the full space of all other
/// sites. Inside exactly degenerate multiplets the projections are replaced
/// by their multiplet average, which is basis independent.
struct PointSpectrum {
  double field = 0.0;
  Eigen::VectorXd energies;
  Eigen::VectorXd projections;
  std::optional<ComplexMatrix> vectors;
};

/// Evaluates spectra of one spin system at fixed D. Immutable after
/// construction; safe to share between threads.
///
/// The Hamiltonian's sparsity pattern (union over B and D) is split into
/// connected components once; each component is diagonalized on its own.
/// Systems whose axes all coincide with the field conserve the total
/// magnetic quantum number and fall apart into many small blocks.
class SpectrumEvaluator {
 public:
  SpectrumEvaluator(const SpinSystemSpec& spec, double zfs_mhz);

  std::size_t dimension() const noexcept { return model_.dimension(); }
  double zfs() const noexcept { return zfs_; }
  const HamiltonianModel& model() const noexcept { return model_; }

  /// Eigenvalues only.
  Eigen::VectorXd energies(double field) const;
  PointSpectrum spectrum(double field, bool keep_vectors = false) const;
  /// Full eigendecomposition (block-aware), eigenvectors as complex columns.
  EigenDecomposition decompose(double field) const;

  /// Probe m_S = 0 state in the probe's lab spin basis.
  const Eigen::Vector3cd& probe_state() const noexcept { return probe_state_; }

  /// Invariant subspaces, as sorted basis indices.
  const std::vector<std::vector<Eigen::Index>>& blocks() const noexcept { return blocks_; }

 private:
  Eigen::VectorXd project(const ComplexMatrix& vectors) const;
  Eigen::VectorXd project(const RealMatrix& vectors) const;

  HamiltonianModel model_;
  double zfs_;
  Eigen::Vector3cd probe_state_;
  Eigen::Index left_ = 1;
  Eigen::Index right_ = 1;
  std::vector<std::vector<Eigen::Index>> blocks_;
};

struct SweepOptions {
  double field_min = 0.0;
  double field_max = 1100.0;
  std::size_t points = 2048;
  double temperature_k = 300.0;
  ThermalZfsModel thermal;
  /// Keep eigenvectors of every point; forced off above kVectorRetentionCap.
  bool keep_vectors = false;
  unsigned threads = 0;
  /// Number of coarse points used to pick the positivity shift.
  std::size_t prescan_points = 17;
};

inline constexpr std::size_t kVectorRetentionCap = 128;

struct SweepResult {
  std::vector<double> fields;                   // ascending, gauss
  std::vector<Eigen::VectorXd> eigenvalues;     // shifted, ascending, MHz
  std::vector<Eigen::VectorXd> projections;     // in [0, 1]
  std::vector<ComplexMatrix> vectors;           // empty unless retained
  double shift = 0.0;                           // MHz added to every eigenvalue
  double zfs = 0.0;                             // D used for the sweep, MHz
  double temperature_k = 0.0;
  std::size_t dimension = 0;

  std::size_t size() const noexcept { return fields.size(); }
};

/// Field sweep at D = zfs_at(T). Throws InvalidInput for an invalid range,
/// fewer than two points or a spec that breaks an invariant.
SweepResult sweep(const SpinSystemSpec& spec, const SweepOptions& options);

/// Evenly spaced grid including both ends.
std::vector<double> field_grid(double field_min, double field_max, std::size_t points);

}  // namespace spin_atlas
