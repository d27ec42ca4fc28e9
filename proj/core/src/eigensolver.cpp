#include "spin_atlas/eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw InvalidInput("eigensolver input must be square");
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

template <typename Matrix>
double symmetric_error(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Matrix>
double scaled_tolerance(const Matrix& h) {
  const double scale = h.size() == 0 ? 0.0 : h.cwiseAbs().maxCoeff();
  return 1e-9 * std::max(1.0, scale / 1e3);
}

template <typename Matrix>
void require_hermitian(const Matrix& h) {
  require_square(h.rows(), h.cols());
  if (symmetric_error(h) > scaled_tolerance(h)) throw InvalidInput("eigensolver input is not Hermitian");
}

}  // namespace

double hermiticity_tolerance(const ComplexMatrix& h) { return scaled_tolerance(h); }

EigenDecomposition eigendecompose(const HermitianMatrix& h) {
  require_hermitian(h);
  const auto n = static_cast<lapack_int>(h.rows());
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;
  ComplexMatrix a = h;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'A', 'U', n, reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0,
      0.0, 0, 0, 0.0, &found, out.values.data(),
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n, support.data());
  check_info(info, "zheevr");
  return out;
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
  require_hermitian(h);
  const auto n = static_cast<lapack_int>(h.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  ComplexMatrix a = h;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  check_info(info, "zheevd");
  return w;
}

RealEigenDecomposition eigendecompose(const RealMatrix& h) {
  require_hermitian(h);
  const auto n = static_cast<lapack_int>(h.rows());
  RealEigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;
  RealMatrix a = h;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                     out.values.data(), out.vectors.data(), n, support.data());
  check_info(info, "dsyevr");
  return out;
}

Eigen::VectorXd eigenvalues(const RealMatrix& h) {
  require_hermitian(h);
  const auto n = static_cast<lapack_int>(h.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  RealMatrix a = h;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  check_info(info, "dsyevd");
  return w;
}

}  // namespace spin_atlas
