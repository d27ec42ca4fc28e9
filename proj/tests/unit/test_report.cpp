#include <gtest/gtest.h>

#include "spin_atlas/report.hpp"
#include "test_support.hpp"

namespace spin_atlas {
namespace {

TEST(Format, FixedAndNegativeZero) {
  EXPECT_EQ(format_fixed(1.005, 2), "1.00");
  EXPECT_EQ(format_fixed(-0.0001, 2), "0.00");
  EXPECT_EQ(format_fixed(-0.0251, 4), "-0.0251");
  EXPECT_EQ(round_to(1024.2649, 2), 1024.26);
}

TEST(Report, SweepCsvShape) {
  SweepOptions o;
  o.field_min = 0.0;
  o.field_max = 10.0;
  o.points = 3;
  const auto csv = sweep_to_csv(sweep(test::single_nv(), o));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "B_gauss,eps_0,eps_1,eps_2,p_0,p_1,p_2");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n5.00,"), std::string::npos);
}

TEST(Report, FeatureJsonKeys) {
  CrossingFeature f;
  CrossingEvent e;
  e.field = 1024.264;
  e.kind = CrossingKind::True;
  f.lines = {e};
  f.center = f.span_lo = f.span_hi = e.field;
  f.slope = -0.02509;
  const auto j = feature_to_json(f);
  EXPECT_EQ(j["center_G"], 1024.26);
  EXPECT_EQ(j["kind"], "true");
  EXPECT_EQ(j["slope_G_per_K"], -0.0251);
  EXPECT_EQ(j["lines"][0]["levels"][1], 1);
  const std::string text = dump(features_to_json({f}));
  EXPECT_EQ(text.back(), '\n');
}

TEST(Report, ShiftCsv) {
  TemperatureShift s;
  s.reference_center = 1024.26;
  s.slope = -0.0251;
  s.points = {{0.0, 1026.84, 2.58, true}, {10.0, std::nan(""), std::nan(""), false}};
  const auto csv = temperature_shift_to_csv(s);
  EXPECT_NE(csv.find("# slope_G_per_K=-0.0251\n"), std::string::npos);
  EXPECT_NE(csv.find("T_K,center_G,delta_G,found\n"), std::string::npos);
  EXPECT_NE(csv.find("0.00,1026.84,2.58,1\n"), std::string::npos) << csv;
}

TEST(Report, DipFitJson) {
  DipFit fit;
  fit.dips = {{512.0, 3.0, 0.02}};
  fit.baseline_offset = 1.0;
  fit.converged = true;
  const auto j = dip_fit_to_json(fit, {});
  EXPECT_TRUE(j.contains("dips"));
  EXPECT_TRUE(j.contains("baseline"));
  EXPECT_TRUE(j.contains("residual_rms"));
  EXPECT_TRUE(j["separations_G"].empty());
}

}  // namespace
}  // namespace spin_atlas
