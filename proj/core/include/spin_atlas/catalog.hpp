#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spin_atlas/crossing.hpp"
#include "spin_atlas/features.hpp"
#include "spin_atlas/spin_system.hpp"

namespace spin_atlas {

/// How an expected feature is matched against detected features.
///   Feature: a feature center lies in [lo - tol, hi + tol].
///   Line:    a single line lies in [lo - tol, hi + tol].
///   Span:    a feature centered in [lo, hi] lies entirely inside [lo - tol, hi + tol].
///   Count:   the feature nearest `lo` (within tol) has exactly `count` lines.
enum class MatchMode { Feature, Line, Span, Count };

struct ExpectedFeature {
  MatchMode mode = MatchMode::Feature;
  double lo = 0.0;  // G
  double hi = 0.0;  // G; equals lo for a point expectation
  double tolerance = 2.0;
  std::optional<CrossingKind> kind;
  std::size_t count = 0;
  std::string note;

  double center() const noexcept { return 0.5 * (lo + hi); }
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::string anchor;  // where the expected numbers come from
  std::vector<std::string> aliases;
  SpinSystemSpec spec;
  std::vector<ExpectedFeature> expected;
  /// Field window swept by default for this entry.
  double sweep_min = 0.0;
  double sweep_max = 1100.0;
  std::size_t sweep_points = 2048;
};

/// Parses a catalog document: a spin-system spec with a "catalog" block.
CatalogEntry parse_catalog_entry(const std::string& text);

/// All shipped entries in stable order.
const std::vector<CatalogEntry>& catalog();

/// (id, description) in catalog order.
std::vector<std::pair<std::string, std::string>> list_systems();

/// Lookup by id or alias. Throws NotFound listing the available ids.
const CatalogEntry& get_system(std::string_view id);

struct ExpectationResult {
  ExpectedFeature expected;
  bool passed = false;
  std::string detail;
};

std::vector<ExpectationResult> check_expectations(const CatalogEntry& entry,
                                                  const std::vector<CrossingFeature>& features);

}  // namespace spin_atlas
