#include "spin_atlas/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

using nlohmann::json;

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

const json& required(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing required key '" + key + "'");
  }
  return obj.at(key);
}

std::size_t index_value(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(where + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

json axis_to_json(const Axis& a) {
  const Vec3& v = a.vector();
  return json::array({v.x(), v.y(), v.z()});
}

Axis axis_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("axis must be an array of 3 numbers");
  const Vec3 v(number(j[0], "axis[0]"), number(j[1], "axis[1]"), number(j[2], "axis[2]"));
  try {
    if (std::abs(v.norm() - 1.0) <= 1e-12) return Axis::from_unit(v);
    return Axis::normalized(v);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

json tensor_to_json(const InteractionTensor& t) {
  const Mat3& m = t.principal;
  const bool diagonal = m(0, 1) == 0.0 && m(0, 2) == 0.0 && m(1, 2) == 0.0 && m(1, 0) == 0.0 &&
                        m(2, 0) == 0.0 && m(2, 1) == 0.0;
  json principal;
  if (diagonal) {
    principal = json::array({m(0, 0), m(1, 1), m(2, 2)});
  } else {
    principal = json::array();
    for (int r = 0; r < 3; ++r) principal.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  }
  return json{{"principal", principal}, {"axis", axis_to_json(t.axis)}};
}

InteractionTensor tensor_from_json(const json& j) {
  InteractionTensor t;
  const json& p = required(j, "principal", "tensor");
  if (!p.is_array() || p.size() != 3) throw ParseError("tensor.principal must have 3 entries");
  if (p[0].is_array()) {
    for (int r = 0; r < 3; ++r) {
      if (!p[r].is_array() || p[r].size() != 3) throw ParseError("tensor.principal rows must have 3 entries");
      for (int c = 0; c < 3; ++c) t.principal(r, c) = number(p[r][c], "tensor.principal");
    }
  } else {
    t.principal = Vec3(number(p[0], "tensor.principal"), number(p[1], "tensor.principal"),
                       number(p[2], "tensor.principal"))
                      .asDiagonal();
  }
  t.axis = j.contains("axis") ? axis_from_json(j.at("axis")) : Axis{};
  return t;
}

SpinSystemSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("spin-system document must be a JSON object");
  SpinSystemSpec spec;
  const json& sites = required(doc, "sites", "document");
  if (!sites.is_array()) throw ParseError("'sites' must be an array");
  std::vector<CouplingSpec> sugar;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const json& s = sites[i];
    const std::string where = "sites[" + std::to_string(i) + "]";
    const json& kind = required(s, "kind", where);
    if (!kind.is_string()) throw ParseError(where + ".kind must be a string");
    SpinSiteSpec site;
    try {
      site.species = SpinSpecies::of(species_kind_from_string(kind.get<std::string>()));
    } catch (const InvalidInput& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (s.contains("gyromagnetic")) site.species.gyromagnetic = number(s.at("gyromagnetic"), "gyromagnetic");
    site.axis = axis_from_json(required(s, "axis", where));
    if (s.contains("label")) site.label = s.at("label").get<std::string>();
    if (s.contains("zfs")) {
      const json& z = s.at("zfs");
      ZfsParams p;
      if (z.contains("D")) p.zfs_override = number(z.at("D"), "zfs.D");
      p.d_parallel = z.value("d_parallel", 0.0);
      p.d_x = z.value("d_x", 0.0);
      p.d_y = z.value("d_y", 0.0);
      site.zfs = p;
    }
    if (s.contains("quadrupole")) site.quadrupole = tensor_from_json(s.at("quadrupole"));
    if (s.contains("hyperfine")) {
      const json& h = s.at("hyperfine");
      CouplingSpec c;
      c.site_a = index_value(required(h, "partner", where + ".hyperfine"), where + ".hyperfine.partner");
      c.site_b = i;
      c.tensor = tensor_from_json(h);
      sugar.push_back(c);
    }
    spec.sites.push_back(std::move(site));
  }
  if (doc.contains("couplings")) {
    const json& cs = doc.at("couplings");
    if (!cs.is_array()) throw ParseError("'couplings' must be an array");
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const std::string where = "couplings[" + std::to_string(k) + "]";
      const json& pair = required(cs[k], "sites", where);
      if (!pair.is_array() || pair.size() != 2) throw ParseError(where + ".sites must be [a, b]");
      CouplingSpec c;
      c.site_a = index_value(pair[0], where + ".sites[0]");
      c.site_b = index_value(pair[1], where + ".sites[1]");
      c.tensor = tensor_from_json(required(cs[k], "tensor", where));
      spec.couplings.push_back(c);
    }
  }
  for (auto& c : sugar) spec.couplings.push_back(c);
  if (doc.contains("probe_site")) spec.probe_site = index_value(doc.at("probe_site"), "probe_site");
  try {
    spec.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid spin system: ") + e.what());
  }
  return spec;
}

json spec_to_json(const SpinSystemSpec& spec) {
  json sites = json::array();
  for (const auto& s : spec.sites) {
    json site;
    if (!s.label.empty()) site["label"] = s.label;
    site["kind"] = std::string(to_string(s.species.kind));
    site["axis"] = axis_to_json(s.axis);
    site["gyromagnetic"] = s.species.gyromagnetic;
    if (s.zfs) {
      json z{{"d_parallel", s.zfs->d_parallel}, {"d_x", s.zfs->d_x}, {"d_y", s.zfs->d_y}};
      if (s.zfs->zfs_override) z["D"] = *s.zfs->zfs_override;
      site["zfs"] = z;
    }
    if (s.quadrupole) site["quadrupole"] = tensor_to_json(*s.quadrupole);
    sites.push_back(site);
  }
  json couplings = json::array();
  for (const auto& c : spec.couplings) {
    couplings.push_back(json{{"sites", json::array({c.site_a, c.site_b})}, {"tensor", tensor_to_json(c.tensor)}});
  }
  return json{{"sites", sites}, {"couplings", couplings}, {"probe_site", spec.probe_site}};
}

SpinSystemSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return spec_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed spin-system document: ") + e.what());
  }
}

std::string emit_spec(const SpinSystemSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

SpinSystemSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace spin_atlas
