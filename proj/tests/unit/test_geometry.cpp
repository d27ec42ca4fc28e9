#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/geometry.hpp"

namespace spin_atlas {
namespace {

TEST(Axis, UnitCheck) {
  EXPECT_NO_THROW(Axis::from_unit(Vec3(0, 0, 1)));
  EXPECT_THROW(Axis::from_unit(Vec3(0, 0, 1.001)), InvalidInput);
  EXPECT_THROW(Axis::normalized(Vec3::Zero()), InvalidInput);
  EXPECT_NEAR(Axis::normalized(Vec3(1, 2, 3)).vector().norm(), 1.0, 1e-15);
}

TEST(Tetrahedral, PairwiseAngles) {
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(tetrahedral::axis(a).vector().norm(), 1.0, 1e-12);
    for (int b = a + 1; b < 4; ++b) {
      EXPECT_NEAR(tetrahedral::axis(a).dot(tetrahedral::axis(b)), -1.0 / 3.0, 1e-12) << a << "," << b;
    }
  }
  EXPECT_EQ(tetrahedral::on_axis().vector(), Vec3(0, 0, 1));
  EXPECT_THROW(tetrahedral::axis(4), InvalidInput);
}

TEST(Rotation, ProperAndMapsZ) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Axis a = Axis::normalized(Vec3(u(rng), u(rng), u(rng)));
    const Mat3 r = rotation_to(a);
    EXPECT_LT((r * r.transpose() - Mat3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    EXPECT_LT((r.col(2) - a.vector()).norm(), 1e-12);
  }
  const Mat3 flip = rotation_to(Axis::from_unit(Vec3(0, 0, -1)));
  EXPECT_NEAR(flip.determinant(), 1.0, 1e-12);
  EXPECT_LT((flip.col(2) - Vec3(0, 0, -1)).norm(), 1e-12);
}

TEST(RotateTensor, IdentityForLabZ) {
  const auto t = InteractionTensor::diagonal(1.0, 2.0, 3.0);
  EXPECT_EQ(rotate_tensor(t), t.principal);
}

TEST(RotateTensor, OffAxisZzComponent) {
  const auto t = InteractionTensor::axial(81.3, 114.0, tetrahedral::axis(1));
  EXPECT_NEAR(rotate_tensor(t)(2, 2), 81.3 * 8.0 / 9.0 + 114.0 / 9.0, 1e-12);
  EXPECT_NEAR(rotate_tensor(t)(2, 2), 84.93, 0.005);
}

TEST(RotateTensor, SpectrumInvariant) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const auto t = InteractionTensor::axial(120.3, 199.7, Axis::normalized(Vec3(u(rng), u(rng), u(rng))));
    const Mat3 lab = rotate_tensor(t);
    EXPECT_LT((lab - lab.transpose()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat3> es(lab);
    EXPECT_NEAR(es.eigenvalues()(0), 120.3, 1e-10);
    EXPECT_NEAR(es.eigenvalues()(1), 120.3, 1e-10);
    EXPECT_NEAR(es.eigenvalues()(2), 199.7, 1e-10);
  }
}

TEST(RotateTensor, RejectsAsymmetric) {
  InteractionTensor t;
  t.principal << 1, 2, 0, 0, 1, 0, 0, 0, 1;
  EXPECT_THROW(rotate_tensor(t), InvalidInput);
}

TEST(AxisInFrame, PolarAngleMeasuredFromFrame) {
  const Axis frame = tetrahedral::axis(2);
  const Axis tilted = axis_in_frame(frame, 1.85, 0.4);
  EXPECT_NEAR(std::acos(tilted.dot(frame)), 1.85, 1e-12);
}

}  // namespace
}  // namespace spin_atlas
