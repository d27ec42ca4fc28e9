#include <gtest/gtest.h>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/sweep.hpp"
#include "test_support.hpp"

namespace spin_atlas {
namespace {

SweepOptions window(double lo, double hi, std::size_t points) {
  SweepOptions o;
  o.field_min = lo;
  o.field_max = hi;
  o.points = points;
  return o;
}

void expect_conserved(const SweepResult& r) {
  const double third = static_cast<double>(r.dimension) / 3.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    ASSERT_NEAR(r.projections[k].sum(), third, 1e-6) << "B = " << r.fields[k];
    ASSERT_GE(r.projections[k].minCoeff(), 0.0);
    ASSERT_LE(r.projections[k].maxCoeff(), 1.0);
    ASSERT_GT(r.eigenvalues[k](0), 0.0);
    for (Eigen::Index i = 1; i < r.eigenvalues[k].size(); ++i) {
      ASSERT_LE(r.eigenvalues[k](i - 1), r.eigenvalues[k](i));
    }
  }
}

TEST(FieldGrid, EndpointsAndValidation) {
  const auto g = field_grid(0.0, 10.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 10.0);
  EXPECT_DOUBLE_EQ(g[3], 3.0);
  EXPECT_THROW(field_grid(5.0, 5.0, 10), InvalidInput);
  EXPECT_THROW(field_grid(-1.0, 5.0, 10), InvalidInput);
  EXPECT_THROW(field_grid(0.0, 5.0, 1), InvalidInput);
}

TEST(Sweep, SingleNvZeroFieldProjections) {
  const auto r = sweep(test::single_nv(), window(0.0, 10.0, 3));
  EXPECT_NEAR(r.projections[0](0), 1.0, 1e-12);
  EXPECT_NEAR(r.projections[0](1), 0.0, 1e-12);
  EXPECT_NEAR(r.projections[0](2), 0.0, 1e-12);
}

TEST(Sweep, ShiftRecordedAndPositive) {
  const auto r = sweep(test::nv_p1(), window(0.0, 1100.0, 64));
  EXPECT_GT(r.shift, 100.0);
  EXPECT_NEAR(r.zfs, zfs_at(ThermalZfsModel{}, 300.0), 1e-12);
  expect_conserved(r);
}

TEST(Sweep, ProjectionConservationAcrossSystems) {
  for (const auto& spec : {test::single_nv(), test::nv_p1(), test::nv_nv(), test::single_nv(tetrahedral::axis(2))}) {
    expect_conserved(sweep(spec, window(0.0, 1100.0, 200)));
  }
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) expect_conserved(sweep(test::random_spec(rng), window(0.0, 1100.0, 24)));
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto o = window(0.0, 1100.0, 97);
  o.threads = 1;
  const auto a = sweep(test::nv_nv(), o);
  o.threads = 4;
  const auto b = sweep(test::nv_nv(), o);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.shift, b.shift);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.eigenvalues[k], b.eigenvalues[k]);
    EXPECT_EQ(a.projections[k], b.projections[k]);
  }
}

TEST(Sweep, VectorRetention) {
  auto o = window(0.0, 100.0, 5);
  o.keep_vectors = true;
  const auto r = sweep(test::nv_p1(), o);
  ASSERT_EQ(r.vectors.size(), 5u);
  EXPECT_EQ(r.vectors[0].rows(), 18);
  o.keep_vectors = false;
  EXPECT_TRUE(sweep(test::nv_p1(), o).vectors.empty());
}

TEST(Sweep, TemperatureSetsZfs) {
  auto o = window(0.0, 100.0, 3);
  o.temperature_k = 0.0;
  EXPECT_EQ(sweep(test::single_nv(), o).zfs, o.thermal.d0);
}

TEST(Sweep, RejectsBadOptions) {
  EXPECT_THROW(sweep(test::single_nv(), window(10.0, 0.0, 10)), InvalidInput);
  EXPECT_THROW(sweep(SpinSystemSpec{}, window(0.0, 10.0, 10)), InvalidInput);
}

TEST(SpectrumEvaluator, BlocksCoverBasis) {
  SpinSystemSpec spec;
  const Axis z;
  spec.sites = {nv_site(z), p1_electron_site(z), n14_site(z), p1_electron_site(z, "p1b"), n14_site(z, true, "n14b")};
  spec.couplings = {ad_hoc_coupling(0, 1), ad_hoc_coupling(0, 3), ad_hoc_coupling(1, 3),
                    {1, 2, InteractionTensor::axial(81.3, 114.0, z)},
                    {3, 4, InteractionTensor::axial(81.3, 114.0, z)}};
  const SpectrumEvaluator ev(spec, 2870.0);
  EXPECT_GT(ev.blocks().size(), 1u);
  std::size_t covered = 0;
  for (const auto& b : ev.blocks()) covered += b.size();
  EXPECT_EQ(covered, ev.dimension());
  // Block-wise energies agree with a dense solve.
  const auto dense = eigenvalues(ev.model().at(333.0, 2870.0));
  EXPECT_LT((ev.energies(333.0) - dense).cwiseAbs().maxCoeff(), 1e-8);
  const auto d = ev.decompose(333.0);
  EXPECT_LT((d.values - dense).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SpectrumEvaluator, ProbeStateForOffAxisNv) {
  const Axis a = tetrahedral::axis(1);
  const SpectrumEvaluator ev(test::single_nv(a), 2870.0);
  // The probe state is annihilated by n.S.
  const auto s = spin_operators(3);
  const Eigen::Matrix3cd ns = a.vector()(0) * s.x + a.vector()(1) * s.y + a.vector()(2) * s.z;
  EXPECT_LT((ns * ev.probe_state()).norm(), 1e-12);
  EXPECT_NEAR(ev.probe_state().norm(), 1.0, 1e-12);
}

}  // namespace
}  // namespace spin_atlas
