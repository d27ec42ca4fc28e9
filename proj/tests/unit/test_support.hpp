#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "spin_atlas/geometry.hpp"
#include "spin_atlas/spin_system.hpp"

namespace spin_atlas::test {

inline SpinSystemSpec single_nv(const Axis& axis = {}, ZfsParams strain = {}) {
  SpinSystemSpec spec;
  spec.sites.push_back(nv_site(axis));
  spec.sites[0].zfs = strain;
  return spec;
}

/// On-axis NV plus a P1 electron with its 14N, all symmetry axes along z.
inline SpinSystemSpec nv_p1() {
  SpinSystemSpec spec;
  const Axis z = tetrahedral::on_axis();
  spec.sites = {nv_site(z), p1_electron_site(z), n14_site(z)};
  spec.couplings = {ad_hoc_coupling(0, 1), {1, 2, InteractionTensor::axial(81.3, 114.0, z)}};
  return spec;
}

/// On-axis and off-axis NV pair.
inline SpinSystemSpec nv_nv() {
  SpinSystemSpec spec;
  spec.sites = {nv_site(tetrahedral::axis(0), "nv0"), nv_site(tetrahedral::axis(1), "nv1")};
  spec.couplings = {ad_hoc_coupling(0, 1)};
  return spec;
}

/// Random but valid composite system: one probe NV, up to two further
/// electrons, P1 nitrogens and an optional 13C. Dimension stays <= 108.
inline SpinSystemSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 3);
  auto axis = [&]() {
    if (pick(rng) == 0) return Axis::normalized(Vec3(u(rng), u(rng), u(rng)));
    return tetrahedral::axis(pick(rng));
  };
  SpinSystemSpec spec;
  spec.sites.push_back(nv_site(axis(), "nv0"));
  ZfsParams strain;
  strain.d_x = 2.0 * u(rng);
  strain.d_y = 2.0 * u(rng);
  spec.sites[0].zfs = strain;
  std::vector<std::size_t> electrons{0};
  const int extra = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int k = 0; k < extra; ++k) {
    const Axis a = axis();
    if (pick(rng) < 2) {
      spec.sites.push_back(nv_site(a, "nv" + std::to_string(k + 1)));
      electrons.push_back(spec.sites.size() - 1);
    } else {
      spec.sites.push_back(p1_electron_site(a, "p1_" + std::to_string(k)));
      const std::size_t e = spec.sites.size() - 1;
      electrons.push_back(e);
      if (spec.dimension() * 3 <= 108) {
        spec.sites.push_back(n14_site(a, true, "n14_" + std::to_string(k)));
        spec.couplings.push_back({e, e + 1, InteractionTensor::axial(81.3, 114.0, a)});
      }
    }
  }
  if (spec.dimension() * 2 <= 108 && pick(rng) == 0) {
    const Axis a = axis();
    spec.sites.push_back(c13_site(a));
    spec.couplings.push_back({0, spec.sites.size() - 1, InteractionTensor::axial(120.3, 199.7, a)});
  }
  for (std::size_t i = 0; i < electrons.size(); ++i)
    for (std::size_t j = i + 1; j < electrons.size(); ++j)
      spec.couplings.push_back(ad_hoc_coupling(electrons[i], electrons[j], 1.0 + 9.0 * std::abs(u(rng))));
  return spec;
}

inline std::filesystem::path scratch_dir() {
  const char* env = std::getenv("SPIN_ATLAS_TEST_TMP");
  std::filesystem::path dir = env ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "spin_atlas_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace spin_atlas::test
