#include <gtest/gtest.h>

#include <fstream>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/spec_io.hpp"
#include "test_support.hpp"

namespace spin_atlas {
namespace {

TEST(SpecIo, RoundTripFixedSystems) {
  for (const auto& spec : {test::single_nv(), test::nv_p1(), test::nv_nv()}) {
    const std::string text = emit_spec(spec);
    const auto back = parse_spec(text);
    EXPECT_EQ(back, spec);
    EXPECT_EQ(emit_spec(back), text);
  }
}

TEST(SpecIo, RoundTripRandomSystems) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const auto spec = test::random_spec(rng);
    const std::string text = emit_spec(spec);
    const auto back = parse_spec(text);
    ASSERT_EQ(emit_spec(back), text) << k;
    ASSERT_EQ(back.dimension(), spec.dimension());
  }
}

TEST(SpecIo, HyperfineSugarBecomesCoupling) {
  const auto spec = parse_spec(R"({
    "sites": [
      {"kind": "nv", "axis": [0, 0, 1], "zfs": {}},
      {"kind": "c13", "axis": [0, 0, 1], "hyperfine": {"partner": 0, "principal": [120.3, 120.3, 199.7], "axis": [0, 0, 1]}}
    ]
  })");
  ASSERT_EQ(spec.couplings.size(), 1u);
  EXPECT_EQ(spec.couplings[0].site_a, 0u);
  EXPECT_EQ(spec.couplings[0].site_b, 1u);
  EXPECT_DOUBLE_EQ(spec.couplings[0].tensor.principal(2, 2), 199.7);
}

TEST(SpecIo, NormalizesAxes) {
  const auto spec = parse_spec(R"({"sites": [{"kind": "nv", "axis": [0, 0, 2], "zfs": {}}]})");
  EXPECT_EQ(spec.sites[0].axis.vector(), Vec3(0, 0, 1));
}

TEST(SpecIo, ZfsOverrideAndStrain) {
  const auto spec = parse_spec(R"({"sites": [{"kind": "nv", "axis": [0, 0, 1], "zfs": {"D": 2880.0, "d_x": 1.5}}]})");
  ASSERT_TRUE(spec.sites[0].zfs);
  EXPECT_EQ(spec.sites[0].zfs->zfs_override, 2880.0);
  EXPECT_EQ(spec.sites[0].zfs->d_x, 1.5);
}

TEST(SpecIo, Errors) {
  EXPECT_THROW(parse_spec("{not json"), ParseError);
  EXPECT_THROW(parse_spec("[]"), ParseError);
  EXPECT_THROW(parse_spec(R"({"sites": [{"kind": "muon", "axis": [0,0,1]}]})"), ParseError);
  EXPECT_THROW(parse_spec(R"({"sites": [{"kind": "nv", "axis": [0,0]}]})"), ParseError);
  EXPECT_THROW(parse_spec(R"({"sites": [{"kind": "nv", "axis": [0,0,1]}]})"), ParseError);  // zfs missing
  EXPECT_THROW(parse_spec(R"({"sites": [{"kind": "nv", "axis": [0,0,1], "zfs": {}}], "probe_site": 3})"), ParseError);
  EXPECT_THROW(load_spec_file(test::scratch_dir() / "does-not-exist.json"), ParseError);
}

TEST(SpecIo, LoadFile) {
  const auto path = test::scratch_dir() / "nv_p1.json";
  std::ofstream(path) << emit_spec(test::nv_p1());
  EXPECT_EQ(load_spec_file(path), test::nv_p1());
}

}  // namespace
}  // namespace spin_atlas
