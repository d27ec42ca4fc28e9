#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spin_atlas/geometry.hpp"

namespace spin_atlas {

enum class SpeciesKind { NVElectron, P1Electron, N14, N15, C13 };

/// Short identifier used in spec files: "nv", "p1", "n14", "n15", "c13".
std::string_view to_string(SpeciesKind kind);
SpeciesKind species_kind_from_string(std::string_view name);

struct SpinSpecies {
  SpeciesKind kind = SpeciesKind::NVElectron;
  /// Signed Zeeman coefficient: H_Z = gyromagnetic * B . S, MHz/G.
  double gyromagnetic = 0.0;

  /// Species with its default Zeeman coefficient.
  static SpinSpecies of(SpeciesKind kind);

  int multiplicity() const noexcept;
  bool is_electron() const noexcept;

  bool operator==(const SpinSpecies&) const = default;
};

/// NV zero-field and strain terms in the NV frame:
///   (D + d_parallel) Sz^2 + d_x (Sx^2 - Sy^2) + d_y (Sx Sy + Sy Sx).
/// `zfs_override` pins D for this site; otherwise the sweep-wide D(T) is used.
struct ZfsParams {
  std::optional<double> zfs_override;
  double d_parallel = 0.0;
  double d_x = 0.0;
  double d_y = 0.0;

  bool operator==(const ZfsParams&) const = default;
};

struct SpinSiteSpec {
  SpinSpecies species;
  Axis axis;
  std::optional<ZfsParams> zfs;                 // NV electron only
  std::optional<InteractionTensor> quadrupole;  // I = 1 only
  std::string label;

  bool operator==(const SpinSiteSpec&) const = default;
};

/// S_a . T . S_b with T given in its principal frame.
struct CouplingSpec {
  std::size_t site_a = 0;
  std::size_t site_b = 0;
  InteractionTensor tensor;

  bool operator==(const CouplingSpec&) const = default;
};

inline constexpr std::size_t kMaxDimension = 1024;

struct SpinSystemSpec {
  std::vector<SpinSiteSpec> sites;
  std::vector<CouplingSpec> couplings;
  std::size_t probe_site = 0;

  std::vector<int> dims() const;
  /// Product of multiplicities (saturates above kMaxDimension).
  std::size_t dimension() const;

  /// Throws InvalidInput describing the first violated invariant.
  void validate() const;

  bool operator==(const SpinSystemSpec&) const = default;
};

// Builders used by the catalog and tests.
SpinSiteSpec nv_site(const Axis& axis, std::string label = "nv");
SpinSiteSpec p1_electron_site(const Axis& axis, std::string label = "p1");
SpinSiteSpec n14_site(const Axis& axis, bool with_quadrupole = true, std::string label = "n14");
SpinSiteSpec c13_site(const Axis& axis, std::string label = "c13");

/// Default transverse electron-electron coupling (xx = yy, zz = 0).
CouplingSpec ad_hoc_coupling(std::size_t a, std::size_t b,
                             double transverse = 5.0);

/// Checks the secular share of an electron-electron coupling tensor in the
/// lab frame: |zz| <= 10% of the largest transverse component.
bool has_low_secular_component(const InteractionTensor& t);

}  // namespace spin_atlas
