#include "spin_atlas/thermal.hpp"

#include <cmath>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

double occupation(double delta_mev, double temperature_k, double boltzmann) {
  if (!(delta_mev > 0.0)) throw InvalidInput("phonon mode energy must be > 0 meV");
  if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k)) {
    throw InvalidInput("temperature must be >= 0 K");
  }
  if (temperature_k == 0.0) return 0.0;
  const double x = delta_mev / (boltzmann * temperature_k);
  // expm1 keeps precision at high T; exp overflow at low T yields n = 0.
  return 1.0 / std::expm1(x);
}

double occupation_derivative(double delta_mev, double temperature_k, double boltzmann) {
  if (!(delta_mev > 0.0)) throw InvalidInput("phonon mode energy must be > 0 meV");
  if (!(temperature_k > 0.0) || !std::isfinite(temperature_k)) {
    throw InvalidInput("derivative requires temperature > 0 K");
  }
  const double x = delta_mev / (boltzmann * temperature_k);
  if (x > 700.0) return 0.0;
  const double em1 = std::expm1(x);
  return (x / temperature_k) * (em1 + 1.0) / (em1 * em1);
}

double zfs_at(const ThermalZfsModel& m, double temperature_k) {
  return m.d0 + m.c1 * occupation(m.delta1, temperature_k, m.boltzmann) +
         m.c2 * occupation(m.delta2, temperature_k, m.boltzmann);
}

double zfs_slope(const ThermalZfsModel& m, double temperature_k) {
  return m.c1 * occupation_derivative(m.delta1, temperature_k, m.boltzmann) +
         m.c2 * occupation_derivative(m.delta2, temperature_k, m.boltzmann);
}

}  // namespace spin_atlas
