#include <gtest/gtest.h>

#include "spin_atlas/catalog.hpp"
#include "spin_atlas/errors.hpp"

namespace spin_atlas {
namespace {

TEST(Catalog, ListsRequiredSystemsInOrder) {
  const auto systems = list_systems();
  ASSERT_GE(systems.size(), 13u);
  const std::vector<std::string> required{"nv",      "nv-nv",      "nv-p1",    "nv-2p1",    "nv-3p1",
                                          "onv-2p1", "onv-3p1",    "2nv-13c",  "nv-onv-13c", "2onv-13c",
                                          "nv-onv-p1", "2onv-p1", "nv-13c"};
  for (std::size_t k = 0; k < required.size(); ++k) EXPECT_EQ(systems[k].first, required[k]);
  EXPECT_EQ(list_systems(), systems);
}

TEST(Catalog, Descriptions) {
  EXPECT_EQ(get_system("2onv-p1").description, "Two off-axis NV centers interact with a P1 center");
  EXPECT_FALSE(get_system("nv-2p1").description.empty());
}

TEST(Catalog, EntriesAreValid) {
  for (const auto& e : catalog()) {
    EXPECT_NO_THROW(e.spec.validate()) << e.id;
    EXPECT_FALSE(e.expected.empty()) << e.id;
    EXPECT_LT(e.sweep_min, e.sweep_max) << e.id;
    EXPECT_FALSE(e.anchor.empty()) << e.id;
    EXPECT_EQ(e.spec.probe_site, 0u) << e.id;
  }
}

TEST(Catalog, ExpectedFeaturesPopulated) {
  const auto& nv2p1 = get_system("nv-2p1");
  EXPECT_TRUE(std::any_of(nv2p1.expected.begin(), nv2p1.expected.end(),
                          [](const auto& x) { return x.mode == MatchMode::Feature && x.center() == 342.0; }));
  const auto& onv = get_system("onv-2p1");
  EXPECT_TRUE(std::any_of(onv.expected.begin(), onv.expected.end(),
                          [](const auto& x) { return x.mode == MatchMode::Count && x.count == 9; }));
  const auto& nv3p1 = get_system("nv-3p1");
  EXPECT_TRUE(std::any_of(nv3p1.expected.begin(), nv3p1.expected.end(),
                          [](const auto& x) { return x.center() == 257.0; }));
}

TEST(Catalog, AliasAndUnknown) {
  EXPECT_EQ(get_system("nv-nv-13c").id, "2nv-13c");
  try {
    get_system("nv-9p1");
    FAIL() << "expected NotFound";
  } catch (const NotFound& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("nv-9p1"), std::string::npos);
    EXPECT_NE(what.find("2onv-p1"), std::string::npos);
  }
}

CrossingFeature feature(std::vector<double> fields, CrossingKind kind = CrossingKind::True) {
  CrossingFeature f;
  for (double b : fields) {
    CrossingEvent e;
    e.field = b;
    e.kind = kind;
    f.lines.push_back(e);
  }
  f.span_lo = fields.front();
  f.span_hi = fields.back();
  f.center = fields[fields.size() / 2];
  return f;
}

TEST(Expectations, Modes) {
  CatalogEntry entry;
  ExpectedFeature point;
  point.lo = point.hi = 591.0;
  ExpectedFeature avoided_line;
  avoided_line.mode = MatchMode::Line;
  avoided_line.lo = 950.0;
  avoided_line.hi = 958.0;
  avoided_line.tolerance = 0.0;
  avoided_line.kind = CrossingKind::Avoided;
  ExpectedFeature span;
  span.mode = MatchMode::Span;
  span.lo = 310.0;
  span.hi = 372.0;
  span.tolerance = 0.0;
  ExpectedFeature count;
  count.mode = MatchMode::Count;
  count.lo = count.hi = 591.0;
  count.count = 3;
  entry.expected = {point, avoided_line, span, count};

  const std::vector<CrossingFeature> good{feature({314.0, 342.0, 368.0}), feature({580.0, 590.5, 600.0}),
                                          feature({952.0}, CrossingKind::Avoided)};
  for (const auto& r : check_expectations(entry, good)) EXPECT_TRUE(r.passed) << r.detail;

  const std::vector<CrossingFeature> bad{feature({300.0, 342.0, 380.0}), feature({585.0, 594.0}),
                                         feature({952.0}, CrossingKind::True)};
  for (const auto& r : check_expectations(entry, bad)) EXPECT_FALSE(r.passed) << r.detail;
}

TEST(Expectations, DetailNamesNearest) {
  CatalogEntry entry;
  ExpectedFeature point;
  point.lo = point.hi = 500.0;
  entry.expected = {point};
  const auto r = check_expectations(entry, {feature({489.0})});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].passed);
  EXPECT_NE(r[0].detail.find("489.00"), std::string::npos);
}

TEST(ParseEntry, Errors) {
  EXPECT_THROW(parse_catalog_entry("{"), ParseError);
  EXPECT_THROW(parse_catalog_entry(R"({"sites": [{"kind": "nv", "axis": [0,0,1], "zfs": {}}]})"), ParseError);
  EXPECT_THROW(parse_catalog_entry(R"({"catalog": {"id": "x", "description": "y",
    "expected": [{"mode": "blob", "center": 1}]}, "sites": [{"kind": "nv", "axis": [0,0,1], "zfs": {}}]})"),
               ParseError);
  EXPECT_THROW(parse_catalog_entry(R"({"catalog": {"id": "x", "description": "y", "sweep": {"bmin": 5, "bmax": 1}},
    "sites": [{"kind": "nv", "axis": [0,0,1], "zfs": {}}]})"),
               ParseError);
  const auto ok = parse_catalog_entry(R"({"catalog": {"id": "x", "description": "y",
    "expected": [{"mode": "line", "range": [1, 2], "kind": "true"}]}, "sites": [{"kind": "nv", "axis": [0,0,1], "zfs": {}}]})");
  EXPECT_EQ(ok.id, "x");
  ASSERT_EQ(ok.expected.size(), 1u);
  EXPECT_EQ(ok.expected[0].mode, MatchMode::Line);
  EXPECT_EQ(ok.expected[0].tolerance, 2.0);
  EXPECT_EQ(ok.sweep_points, 2048u);
}

}  // namespace
}  // namespace spin_atlas
