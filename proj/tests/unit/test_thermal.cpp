#include <gtest/gtest.h>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/thermal.hpp"

namespace spin_atlas {
namespace {

TEST(Occupation, Values) {
  EXPECT_EQ(occupation(58.73, 0.0), 0.0);
  EXPECT_NEAR(occupation(58.73, 300.0), 0.1150, 5e-5);
  EXPECT_NEAR(occupation(145.5, 300.0), 3.610e-3, 5e-6);
  EXPECT_THROW(occupation(58.73, -1.0), InvalidInput);
  EXPECT_THROW(occupation(0.0, 300.0), InvalidInput);
  EXPECT_THROW(occupation_derivative(58.73, 0.0), InvalidInput);
}

TEST(Zfs, Values) {
  const ThermalZfsModel m;
  EXPECT_EQ(zfs_at(m, 0.0), m.d0);
  EXPECT_NEAR(zfs_at(m, 300.0), 2870.38, 0.01);
  EXPECT_NEAR(zfs_at(m, 300.0) - zfs_at(m, 0.0), -7.22, 0.01);
  EXPECT_GT(zfs_at(m, 100.0), zfs_at(m, 300.0));
}

TEST(Zfs, Slope) {
  const ThermalZfsModel m;
  EXPECT_NEAR(zfs_slope(m, 300.0), -0.0703, 5e-5);
  EXPECT_NEAR(zfs_slope(m, 300.0) / 2.8024, -0.0251, 5e-5);
  EXPECT_LT(std::abs(zfs_slope(m, 10.0)), 1e-4);
  EXPECT_THROW(zfs_slope(m, 0.0), InvalidInput);
}

TEST(Zfs, StrictlyDecreasing) {
  const ThermalZfsModel m;
  double prev = zfs_at(m, 0.0);
  for (double t = 5.0; t <= 600.0; t += 5.0) {
    const double d = zfs_at(m, t);
    // Below ~30 K the phonon occupations underflow the double mantissa of D.
    if (t < 30.0) EXPECT_LE(d, prev) << t;
    else EXPECT_LT(d, prev) << t;
    prev = d;
  }
}

TEST(Zfs, AnalyticSlopeMatchesFiniteDifference) {
  const ThermalZfsModel m;
  for (double t = 50.0; t <= 300.0; t += 2.5) {
    const double h = 1e-3;
    const double fd = (zfs_at(m, t + h) - zfs_at(m, t - h)) / (2.0 * h);
    EXPECT_NEAR(zfs_slope(m, t), fd, 1e-6) << t;
  }
}

}  // namespace
}  // namespace spin_atlas
