#include "spin_atlas/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/spec_io.hpp"

namespace spin_atlas {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_catalog();
}

namespace {

MatchMode mode_from_string(const std::string& s) {
  if (s == "feature") return MatchMode::Feature;
  if (s == "line") return MatchMode::Line;
  if (s == "span") return MatchMode::Span;
  if (s == "count") return MatchMode::Count;
  throw ParseError("unknown expectation mode '" + s + "'");
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string describe(const ExpectedFeature& e) {
  std::string where = e.lo == e.hi ? fmt2(e.lo) : fmt2(e.lo) + "-" + fmt2(e.hi);
  return where + " G +/- " + fmt2(e.tolerance);
}

}  // namespace

CatalogEntry parse_catalog_entry(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("catalog document is not valid JSON: ") + e.what());
  }
  if (!doc.contains("catalog") || !doc["catalog"].is_object()) {
    throw ParseError("catalog document lacks a 'catalog' block");
  }
  CatalogEntry entry;
  entry.spec = spec_from_json(doc);
  try {
    const auto& c = doc["catalog"];
    entry.id = c.at("id").get<std::string>();
    entry.description = c.at("description").get<std::string>();
    entry.anchor = c.value("anchor", std::string{});
    entry.aliases = c.value("aliases", std::vector<std::string>{});
    if (c.contains("sweep")) {
      const auto& s = c["sweep"];
      entry.sweep_min = s.value("bmin", entry.sweep_min);
      entry.sweep_max = s.value("bmax", entry.sweep_max);
      entry.sweep_points = s.value("points", entry.sweep_points);
    }
    for (const auto& e : c.value("expected", nlohmann::json::array())) {
      ExpectedFeature x;
      x.mode = mode_from_string(e.value("mode", std::string("feature")));
      if (e.contains("range")) {
        x.lo = e["range"].at(0).get<double>();
        x.hi = e["range"].at(1).get<double>();
      } else {
        x.lo = x.hi = e.at("center").get<double>();
      }
      x.tolerance = e.value("tolerance", 2.0);
      if (e.contains("kind")) {
        const auto k = e["kind"].get<std::string>();
        if (k != "true" && k != "avoided") throw ParseError("expected kind must be 'true' or 'avoided'");
        x.kind = k == "true" ? CrossingKind::True : CrossingKind::Avoided;
      }
      x.count = e.value("count", std::size_t{0});
      x.note = e.value("note", std::string{});
      if (x.lo > x.hi || x.lo < 0.0 || x.hi > 1100.0) throw ParseError("expected feature outside [0, 1100] G");
      entry.expected.push_back(std::move(x));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed catalog block: ") + e.what());
  }
  if (!(entry.sweep_min < entry.sweep_max) || entry.sweep_points < 2) {
    throw ParseError("catalog entry '" + entry.id + "' has an invalid sweep window");
  }
  return entry;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<std::pair<int, CatalogEntry>> ordered;
    for (const auto& [name, text] : detail::embedded_catalog()) {
      // Files are named NN-<id>.json; NN fixes the listing order.
      const int order = std::stoi(std::string(name.substr(0, name.find('-'))));
      try {
        ordered.emplace_back(order, parse_catalog_entry(std::string(text)));
      } catch (const std::exception& e) {
        throw ParseError("catalog file " + std::string(name) + ": " + e.what());
      }
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<CatalogEntry> out;
    for (auto& [_, e] : ordered) {
      for (const auto& prev : out) {
        if (prev.id == e.id) throw ParseError("duplicate catalog id '" + e.id + "'");
      }
      out.push_back(std::move(e));
    }
    return out;
  }();
  return entries;
}

std::vector<std::pair<std::string, std::string>> list_systems() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : catalog()) out.emplace_back(e.id, e.description);
  return out;
}

const CatalogEntry& get_system(std::string_view id) {
  for (const auto& e : catalog()) {
    if (e.id == id || std::find(e.aliases.begin(), e.aliases.end(), id) != e.aliases.end()) return e;
  }
  std::string ids;
  for (const auto& e : catalog()) ids += (ids.empty() ? "" : ", ") + e.id;
  throw NotFound("unknown system '" + std::string(id) + "'; available: " + ids);
}

std::vector<ExpectationResult> check_expectations(const CatalogEntry& entry,
                                                  const std::vector<CrossingFeature>& features) {
  std::vector<ExpectationResult> results;
  for (const auto& x : entry.expected) {
    ExpectationResult r{x, false, {}};
    const double lo = x.lo - x.tolerance;
    const double hi = x.hi + x.tolerance;
    auto kind_ok = [&](std::string_view k) { return !x.kind || k == to_string(*x.kind) || k == "mixed"; };
    switch (x.mode) {
      case MatchMode::Feature: {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : features) {
          if (f.center >= lo && f.center <= hi && kind_ok(f.kind())) r.passed = true;
          if (std::abs(f.center - x.center()) < std::abs(best - x.center())) best = f.center;
        }
        r.detail = "feature " + describe(x) + "; nearest center " + (std::isfinite(best) ? fmt2(best) : "none");
        break;
      }
      case MatchMode::Line: {
        double best = std::numeric_limits<double>::infinity();
        std::string best_kind = "none";
        for (const auto& f : features) {
          for (const auto& l : f.lines) {
            const bool in = l.field >= lo && l.field <= hi;
            if (in && (!x.kind || l.kind == *x.kind)) r.passed = true;
            if (std::abs(l.field - x.center()) < std::abs(best - x.center())) {
              best = l.field;
              best_kind = std::string(to_string(l.kind));
            }
          }
        }
        r.detail = "line " + describe(x) + (x.kind ? " (" + std::string(to_string(*x.kind)) + ")" : "") +
                   "; nearest " + (std::isfinite(best) ? fmt2(best) + " (" + best_kind + ")" : "none");
        break;
      }
      case MatchMode::Span: {
        std::string seen = "none";
        for (const auto& f : features) {
          if (f.center < x.lo || f.center > x.hi) continue;
          seen = fmt2(f.span_lo) + "-" + fmt2(f.span_hi);
          if (f.span_lo >= lo && f.span_hi <= hi) r.passed = true;
        }
        r.detail = "span within " + fmt2(lo) + "-" + fmt2(hi) + " G; found " + seen;
        break;
      }
      case MatchMode::Count: {
        const CrossingFeature* best = nullptr;
        for (const auto& f : features) {
          if (!best || std::abs(f.center - x.center()) < std::abs(best->center - x.center())) best = &f;
        }
        if (best && std::abs(best->center - x.center()) <= x.tolerance) {
          r.passed = best->lines.size() == x.count;
          r.detail = std::to_string(x.count) + " lines near " + fmt2(x.center()) + " G; found " +
                     std::to_string(best->lines.size()) + " around " + fmt2(best->center);
        } else {
          r.detail = "no feature within " + fmt2(x.tolerance) + " G of " + fmt2(x.center());
        }
        break;
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace spin_atlas
