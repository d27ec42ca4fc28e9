#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace spin_atlas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Complex Hermitian operator in MHz. The alias keeps Eigen interop; the
/// invariant ||M - M^dagger||_max < 1e-9 is checked where it matters.
using HermitianMatrix = ComplexMatrix;

/// Angular-momentum matrices in the |m = S, S-1, ..., -S> basis.
struct SpinOperators {
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;

  int multiplicity() const noexcept { return static_cast<int>(z.rows()); }
  const ComplexMatrix& operator[](int component) const;
};

/// Spin-1/2 or spin-1 matrices. Throws InvalidInput for other multiplicities.
SpinOperators spin_operators(int multiplicity);

/// I (x) ... (x) op (x) ... (x) I, with op in position `slot` of `dims`.
HermitianMatrix embed(const ComplexMatrix& op, std::size_t slot, std::span<const int> dims);

/// max |M - M^dagger|.
double hermiticity_error(const ComplexMatrix& m);

/// max |M_ij|, 0 for empty.
double max_abs(const ComplexMatrix& m);

}  // namespace spin_atlas
