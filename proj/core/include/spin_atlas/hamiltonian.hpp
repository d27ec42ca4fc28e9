#pragma once

#include <variant>

#include "spin_atlas/spin_operators.hpp"
#include "spin_atlas/spin_system.hpp"

namespace spin_atlas {

/// Ground-state spin Hamiltonian of a composite system, split into the parts
/// that scale with the applied field and with the NV zero-field splitting:
///
///   H(B, D) = H_fixed + D * H_zfs + B * H_zeeman
///
/// H_fixed collects strain, quadrupole, hyperfine and electron-electron terms;
/// H_zfs is the sum of (n . S)^2 over NV sites that follow the shared D.
/// Precomputing the three parts makes each sweep point a pair of axpy's.
class HamiltonianModel {
 public:
  /// Validates the spec (throws InvalidInput).
  explicit HamiltonianModel(const SpinSystemSpec& spec);

  std::size_t dimension() const noexcept { return dimension_; }
  /// True when every part has an exactly zero imaginary component, which
  /// allows the real symmetric eigensolver.
  bool is_real() const noexcept { return real_; }

  /// Precondition: field >= 0, zfs > 0. Throws InvalidInput otherwise.
  HermitianMatrix at(double field_gauss, double zfs_mhz) const;
  /// Real part of at(); only meaningful when is_real().
  RealMatrix real_at(double field_gauss, double zfs_mhz) const;

  const HermitianMatrix& fixed_part() const noexcept { return fixed_; }
  const HermitianMatrix& zfs_part() const noexcept { return zfs_; }
  const HermitianMatrix& zeeman_part() const noexcept { return zeeman_; }

 private:
  std::size_t dimension_ = 0;
  bool real_ = false;
  HermitianMatrix fixed_;
  HermitianMatrix zfs_;
  HermitianMatrix zeeman_;
  RealMatrix fixed_real_;
  RealMatrix zfs_real_;
  RealMatrix zeeman_real_;
};

/// One-shot construction; for sweeps prefer HamiltonianModel.
HermitianMatrix build_hamiltonian(const SpinSystemSpec& spec, double field_gauss, double zfs_mhz);

/// Single-site NV operator (D + d_par) Sz'^2 + d_x (Sx'^2 - Sy'^2) + d_y {Sx', Sy'}
/// in the lab basis, where primes denote the NV frame.
ComplexMatrix nv_zero_field_operator(const Axis& axis, double zfs, const ZfsParams& strain);

/// I . Q . I on a single site, Q given in its principal frame.
ComplexMatrix quadratic_form(const SpinOperators& ops, const Mat3& lab_tensor);

/// Kronecker product of the factors in order.
ComplexMatrix kron_chain(const std::vector<const ComplexMatrix*>& factors);

}  // namespace spin_atlas
