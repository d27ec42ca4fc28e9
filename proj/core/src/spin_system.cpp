#include "spin_atlas/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spin_atlas/errors.hpp"
#include "spin_atlas/units.hpp"

namespace spin_atlas {

std::string_view to_string(SpeciesKind kind) {
  switch (kind) {
    case SpeciesKind::NVElectron: return "nv";
    case SpeciesKind::P1Electron: return "p1";
    case SpeciesKind::N14: return "n14";
    case SpeciesKind::N15: return "n15";
    case SpeciesKind::C13: return "c13";
  }
  return "?";
}

SpeciesKind species_kind_from_string(std::string_view name) {
  if (name == "nv") return SpeciesKind::NVElectron;
  if (name == "p1") return SpeciesKind::P1Electron;
  if (name == "n14") return SpeciesKind::N14;
  if (name == "n15") return SpeciesKind::N15;
  if (name == "c13") return SpeciesKind::C13;
  throw InvalidInput("unknown spin species '" + std::string(name) +
                     "' (expected nv, p1, n14, n15 or c13)");
}

SpinSpecies SpinSpecies::of(SpeciesKind kind) {
  switch (kind) {
    case SpeciesKind::NVElectron:
    case SpeciesKind::P1Electron: return {kind, units::kElectronGyromagnetic};
    case SpeciesKind::N14: return {kind, units::kN14Gyromagnetic};
    case SpeciesKind::N15: return {kind, units::kN15Gyromagnetic};
    case SpeciesKind::C13: return {kind, units::kC13Gyromagnetic};
  }
  throw InvalidInput("unknown species kind");
}

int SpinSpecies::multiplicity() const noexcept {
  switch (kind) {
    case SpeciesKind::NVElectron:
    case SpeciesKind::N14: return 3;
    default: return 2;
  }
}

bool SpinSpecies::is_electron() const noexcept {
  return kind == SpeciesKind::NVElectron || kind == SpeciesKind::P1Electron;
}

std::vector<int> SpinSystemSpec::dims() const {
  std::vector<int> out;
  out.reserve(sites.size());
  for (const auto& s : sites) out.push_back(s.species.multiplicity());
  return out;
}

std::size_t SpinSystemSpec::dimension() const {
  std::size_t d = 1;
  for (const auto& s : sites) {
    d *= static_cast<std::size_t>(s.species.multiplicity());
    if (d > kMaxDimension) return d;  // products stay small; this just caps the loop
  }
  return d;
}

bool has_low_secular_component(const InteractionTensor& t) {
  const Mat3 lab = rotate_tensor(t);
  const double transverse = std::max(std::abs(lab(0, 0)), std::abs(lab(1, 1)));
  return std::abs(lab(2, 2)) <= 0.1 * transverse + 1e-12;
}

void SpinSystemSpec::validate() const {
  if (sites.empty()) throw InvalidInput("spin system has no sites");
  if (dimension() > kMaxDimension) {
    throw InvalidInput("composite dimension " + std::to_string(dimension()) +
                       " exceeds the cap of " + std::to_string(kMaxDimension));
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    const std::string where = "site " + std::to_string(i) + ": ";
    if (std::abs(s.axis.vector().norm() - 1.0) > 1e-12) throw InvalidInput(where + "axis not normalized");
    const bool is_nv = s.species.kind == SpeciesKind::NVElectron;
    if (is_nv != s.zfs.has_value()) {
      throw InvalidInput(where + "zfs block is required for NV electrons and forbidden otherwise");
    }
    if (s.zfs && s.zfs->zfs_override && !(*s.zfs->zfs_override > 0.0)) {
      throw InvalidInput(where + "zfs override must be positive");
    }
    if (s.quadrupole) {
      if (s.species.multiplicity() != 3 || s.species.is_electron()) {
        throw InvalidInput(where + "quadrupole tensor only allowed for I = 1 nuclei");
      }
      rotate_tensor(*s.quadrupole);  // symmetry check
    }
    if (!std::isfinite(s.species.gyromagnetic)) throw InvalidInput(where + "non-finite gyromagnetic ratio");
  }
  for (std::size_t c = 0; c < couplings.size(); ++c) {
    const auto& cp = couplings[c];
    const std::string where = "coupling " + std::to_string(c) + ": ";
    if (cp.site_a >= sites.size() || cp.site_b >= sites.size()) throw InvalidInput(where + "site index out of range");
    if (cp.site_a == cp.site_b) throw InvalidInput(where + "a site cannot couple to itself");
    rotate_tensor(cp.tensor);
    if (sites[cp.site_a].species.is_electron() && sites[cp.site_b].species.is_electron() &&
        !has_low_secular_component(cp.tensor)) {
      throw InvalidInput(where + "electron-electron coupling has a secular (zz) component above 10% "
                                 "of the transverse part");
    }
  }
  if (probe_site >= sites.size() || sites[probe_site].species.kind != SpeciesKind::NVElectron) {
    throw InvalidInput("probe_site must refer to an NV electron");
  }
}

SpinSiteSpec nv_site(const Axis& axis, std::string label) {
  SpinSiteSpec s;
  s.species = SpinSpecies::of(SpeciesKind::NVElectron);
  s.axis = axis;
  s.zfs = ZfsParams{};
  s.label = std::move(label);
  return s;
}

SpinSiteSpec p1_electron_site(const Axis& axis, std::string label) {
  SpinSiteSpec s;
  s.species = SpinSpecies::of(SpeciesKind::P1Electron);
  s.axis = axis;
  s.label = std::move(label);
  return s;
}

SpinSiteSpec n14_site(const Axis& axis, bool with_quadrupole, std::string label) {
  SpinSiteSpec s;
  s.species = SpinSpecies::of(SpeciesKind::N14);
  s.axis = axis;
  if (with_quadrupole) {
    const double p = units::kP1Quadrupole;
    s.quadrupole = InteractionTensor::diagonal(-p / 3.0, -p / 3.0, 2.0 * p / 3.0, axis);
  }
  s.label = std::move(label);
  return s;
}

SpinSiteSpec c13_site(const Axis& axis, std::string label) {
  SpinSiteSpec s;
  s.species = SpinSpecies::of(SpeciesKind::C13);
  s.axis = axis;
  s.label = std::move(label);
  return s;
}

CouplingSpec ad_hoc_coupling(std::size_t a, std::size_t b, double transverse) {
  return {a, b, InteractionTensor::diagonal(transverse, transverse, 0.0)};
}

}  // namespace spin_atlas
