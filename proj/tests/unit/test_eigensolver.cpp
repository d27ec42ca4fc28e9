#include <gtest/gtest.h>

#include <random>

#include "spin_atlas/eigensolver.hpp"
#include "spin_atlas/errors.hpp"
#include "spin_atlas/hamiltonian.hpp"

namespace spin_atlas {
namespace {

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

TEST(Eigensolver, Diagonal) {
  const RealMatrix h = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto e = eigenvalues(h);
  EXPECT_EQ(e, Eigen::Vector3d(1, 2, 3));
}

TEST(Eigensolver, PauliX) {
  ComplexMatrix h(2, 2);
  h << 0, 1, 1, 0;
  const auto d = eigendecompose(h);
  EXPECT_NEAR(d.values(0), -1.0, 1e-14);
  EXPECT_NEAR(d.values(1), 1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(d.vectors(0, 0)), r, 1e-14);
  EXPECT_NEAR(std::abs(d.vectors(0, 0) + d.vectors(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(d.vectors(0, 1) - d.vectors(1, 1)), 0.0, 1e-14);
}

TEST(Eigensolver, Reconstruction54) {
  std::mt19937_64 rng(54);
  const ComplexMatrix h = random_hermitian(rng, 54, 100.0);
  const auto d = eigendecompose(h);
  const ComplexMatrix back = d.vectors * d.values.cast<Complex>().asDiagonal() * d.vectors.adjoint();
  EXPECT_LT((back - h).norm() / h.norm(), 1e-6);
  EXPECT_LT((d.vectors.adjoint() * d.vectors - ComplexMatrix::Identity(54, 54)).norm(), 1e-10);
  for (Eigen::Index i = 1; i < 54; ++i) EXPECT_LE(d.values(i - 1), d.values(i));
  EXPECT_LT((eigenvalues(h) - d.values).norm(), 1e-8);
}

TEST(Eigensolver, RealPathAgreesWithComplex) {
  std::mt19937_64 rng(3);
  const RealMatrix h = random_hermitian(rng, 40, 10.0).real();
  const auto real = eigendecompose(h);
  const auto complex = eigendecompose(ComplexMatrix(h.cast<Complex>()));
  EXPECT_LT((real.values - complex.values).norm(), 1e-10);
  EXPECT_LT((real.vectors * real.values.asDiagonal() * real.vectors.transpose() - h).norm(), 1e-10);
}

TEST(Eigensolver, RejectsBadInput) {
  EXPECT_THROW(eigendecompose(ComplexMatrix(2, 3)), InvalidInput);
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose(h), InvalidInput);
  EXPECT_THROW(eigenvalues(h), InvalidInput);
}

}  // namespace
}  // namespace spin_atlas
