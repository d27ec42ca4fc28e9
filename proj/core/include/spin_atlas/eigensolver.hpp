#pragma once

#include <Eigen/Dense>

#include "spin_atlas/spin_operators.hpp"

namespace spin_atlas {

/// Eigenpairs with eigenvalues ascending and orthonormal eigenvector columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

struct RealEigenDecomposition {
  Eigen::VectorXd values;
  RealMatrix vectors;
};

/// Dense Hermitian eigensolver (LAPACK MRRR driver). Reentrant.
/// Throws InvalidInput for non-square or non-Hermitian input and
/// NumericalError when LAPACK reports failure.
EigenDecomposition eigendecompose(const HermitianMatrix& h);
Eigen::VectorXd eigenvalues(const HermitianMatrix& h);

/// Real symmetric fast path; same contract.
RealEigenDecomposition eigendecompose(const RealMatrix& h);
Eigen::VectorXd eigenvalues(const RealMatrix& h);

/// Tolerance used by the Hermiticity check: 1e-9 MHz, scaled up for
/// matrices whose entries exceed 1e3 MHz.
double hermiticity_tolerance(const ComplexMatrix& h);

}  // namespace spin_atlas
