#pragma once

namespace spin_atlas {

/// Two-phonon-mode temperature dependence of the NV zero-field splitting:
///
///   D(T) = D0 + c1 n1(T) + c2 n2(T),   n_i = 1 / (exp(delta_i / kB T) - 1)
///
/// D is the only temperature-dependent Hamiltonian parameter in this library.
struct ThermalZfsModel {
  double d0 = 2877.6;      // MHz, ZFS at T = 0
  double c1 = -54.91;      // MHz
  double c2 = -249.6;      // MHz
  double delta1 = 58.73;   // meV
  double delta2 = 145.5;   // meV
  double boltzmann = 8.617333e-2;  // meV/K

  bool operator==(const ThermalZfsModel&) const = default;
};

/// Mean phonon occupation; 0 at T = 0. Throws InvalidInput for T < 0 or
/// delta <= 0.
double occupation(double delta_mev, double temperature_k, double boltzmann = 8.617333e-2);

/// dn/dT; Throws InvalidInput for T <= 0.
double occupation_derivative(double delta_mev, double temperature_k, double boltzmann = 8.617333e-2);

/// D(T) in MHz.
double zfs_at(const ThermalZfsModel& model, double temperature_k);

/// dD/dT in MHz/K (analytic). T = 0 is rejected.
double zfs_slope(const ThermalZfsModel& model, double temperature_k);

}  // namespace spin_atlas
