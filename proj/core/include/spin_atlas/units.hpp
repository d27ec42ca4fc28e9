#pragma once

// Unit conventions used throughout: energies in MHz (h = 1), fields in gauss,
// temperatures in kelvin, phonon energies in meV.

namespace spin_atlas::units {

/// Electron Zeeman coefficient g_s * mu_B.
inline constexpr double kElectronGyromagnetic = 2.8024;  // MHz/G

// Nuclear Zeeman coefficients, signed so that H_Z = gamma * B . I.
inline constexpr double kN14Gyromagnetic = -3.077e-4;  // MHz/G
inline constexpr double kN15Gyromagnetic = 4.316e-4;   // MHz/G
inline constexpr double kC13Gyromagnetic = -1.0705e-3; // MHz/G

inline constexpr double kBoltzmannMeVPerK = 8.617333e-2;

/// P1 (substitutional nitrogen) 14N hyperfine tensor principal values.
inline constexpr double kP1HyperfinePerp = 81.3;    // MHz
inline constexpr double kP1HyperfinePar = 114.0;    // MHz
/// P1 14N axial quadrupole parameter P in P * (I_z^2 - I(I+1)/3).
inline constexpr double kP1Quadrupole = -3.97;      // MHz

/// First-shell 13C hyperfine tensor and the tilt of its unique axis from
/// the host NV axis.
inline constexpr double kC13HyperfinePerp = 120.3;  // MHz
inline constexpr double kC13HyperfinePar = 199.7;   // MHz
inline constexpr double kC13TiltDegrees = 106.0;

/// Ad-hoc electron-electron coupling: purely transverse, lab frame.
inline constexpr double kAdHocTransverseCoupling = 5.0;  // MHz

/// Zero-field splitting near room temperature; used only as a fallback.
inline constexpr double kRoomTemperatureZfs = 2870.0;  // MHz

}  // namespace spin_atlas::units
