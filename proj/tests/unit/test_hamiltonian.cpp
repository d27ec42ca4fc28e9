#include <gtest/gtest.h>

#include "spin_atlas/eigensolver.hpp"
#include "spin_atlas/errors.hpp"
#include "spin_atlas/hamiltonian.hpp"
#include "test_support.hpp"

namespace spin_atlas {
namespace {

constexpr double kGamma = 2.8024;

Eigen::VectorXd spectrum_of(const SpinSystemSpec& spec, double b, double d) {
  return eigenvalues(build_hamiltonian(spec, b, d));
}

TEST(Hamiltonian, SingleNvZeroField) {
  const auto e = spectrum_of(test::single_nv(), 0.0, 2870.0);
  EXPECT_NEAR(e(0), 0.0, 1e-9);
  EXPECT_NEAR(e(1), 2870.0, 1e-9);
  EXPECT_NEAR(e(2), 2870.0, 1e-9);
}

TEST(Hamiltonian, SingleNvZeemanSplitting) {
  const auto e = spectrum_of(test::single_nv(), 512.2, 2870.0);
  EXPECT_NEAR(e(0), 0.0, 1e-9);
  EXPECT_NEAR(e(1), 2870.0 - kGamma * 512.2, 1e-9);
  EXPECT_NEAR(e(2), 2870.0 + kGamma * 512.2, 1e-9);
  // Published values use a rounded gyromagnetic ratio.
  EXPECT_NEAR(e(1), 1434.8, 0.25);
  EXPECT_NEAR(e(2), 4305.2, 0.25);
}

TEST(Hamiltonian, GslacDegeneracy) {
  const double b = 2870.0 / kGamma;
  EXPECT_NEAR(b, 1024.1, 0.05);
  const auto e = spectrum_of(test::single_nv(), b, 2870.0);
  EXPECT_LT(e(1) - e(0), 1e-9);
}

TEST(Hamiltonian, PartsRecombine) {
  const auto spec = test::nv_p1();
  const HamiltonianModel model(spec);
  EXPECT_EQ(model.dimension(), 18u);
  EXPECT_TRUE(model.is_real());
  const ComplexMatrix h = model.at(640.0, 2871.0);
  const ComplexMatrix sum = model.fixed_part() + 2871.0 * model.zfs_part() + 640.0 * model.zeeman_part();
  EXPECT_LT(max_abs(h - sum), 1e-9);
  EXPECT_LT(hermiticity_error(h), 1e-12);
  EXPECT_LT((model.real_at(640.0, 2871.0) - h.real()).norm(), 1e-12);
}

TEST(Hamiltonian, RejectsInvalidPoint) {
  const HamiltonianModel model(test::single_nv());
  EXPECT_THROW(model.at(-1.0, 2870.0), InvalidInput);
  EXPECT_THROW(model.at(10.0, 0.0), InvalidInput);
}

TEST(Hamiltonian, StrainMixesZeroFieldLevels) {
  ZfsParams strain;
  strain.d_x = 1.0;
  const auto e = spectrum_of(test::single_nv({}, strain), 0.0, 2870.0);
  EXPECT_NEAR(e(2) - e(1), 2.0, 1e-9);
}

TEST(Hamiltonian, OffAxisNvSpectrumMatchesRotatedFrame) {
  // Zero-field spectrum is rotation invariant.
  const auto e = spectrum_of(test::single_nv(tetrahedral::axis(3)), 0.0, 2870.0);
  EXPECT_NEAR(e(0), 0.0, 1e-9);
  EXPECT_NEAR(e(2), 2870.0, 1e-9);
}

TEST(Hamiltonian, KronChainOrder) {
  const auto a = spin_operators(2).z;
  const auto b = spin_operators(3).z;
  const ComplexMatrix k = kron_chain({&a, &b});
  ASSERT_EQ(k.rows(), 6);
  EXPECT_DOUBLE_EQ(k(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(k(2, 2).real(), -0.5);
  EXPECT_DOUBLE_EQ(k(3, 3).real(), -0.5);
}

TEST(Hamiltonian, QuadraticFormTrace) {
  const auto ops = spin_operators(3);
  const Mat3 q = Vec3(1.0, 2.0, 3.0).asDiagonal();
  // tr(I.Q.I) = sum_a Q_aa tr(I_a^2) = 2 * tr(Q) for spin 1.
  EXPECT_NEAR(quadratic_form(ops, q).trace().real(), 12.0, 1e-12);
}

}  // namespace
}  // namespace spin_atlas

namespace spin_atlas {
namespace {

TEST(HamiltonianProperty, RandomSystemsHermitianAndReconstructed) {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> field(0.0, 1100.0);
  std::uniform_real_distribution<double> zfs(2860.0, 2880.0);
  for (int k = 0; k < 1000; ++k) {
    const auto spec = test::random_spec(rng);
    ASSERT_NO_THROW(spec.validate()) << k;
    const ComplexMatrix h = build_hamiltonian(spec, field(rng), zfs(rng));
    ASSERT_LE(hermiticity_error(h), 1e-9 * std::max(1.0, max_abs(h))) << k;
    const auto d = eigendecompose(h);
    const ComplexMatrix back = d.vectors * d.values.cast<Complex>().asDiagonal() * d.vectors.adjoint();
    ASSERT_LT((back - h).norm() / h.norm(), 1e-6) << k;
  }
}

}  // namespace
}  // namespace spin_atlas
