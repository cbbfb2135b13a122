#pragma once

// Internal unit system: lengths in nm, energies in neV, times in s.
// Frequencies on the imaginary axis are carried either as angular
// frequency xi [rad/s] or as the wavenumber q = xi/c [1/nm].

#include <numbers>

namespace badlands::units {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar = 6.582119569e-7;        // neV s
inline constexpr double hbar_c = 1.97327e11;          // neV nm
inline constexpr double c = hbar_c / hbar;            // nm/s
inline constexpr double hydrogen_mc2 = 9.38783e17;    // neV
inline constexpr double bohr_radius = 0.0529177210903;  // nm
inline constexpr double standard_gravity = 9.81;      // m/s^2

inline constexpr double nm_per_m = 1e9;
inline constexpr double neV_per_eV = 1e9;
inline constexpr double peV_per_neV = 1e3;
inline constexpr double hbar_eV_s = hbar / neV_per_eV;

/// Photon energy hbar*xi in eV for a wavenumber q = xi/c in 1/nm.
inline constexpr double photon_energy_eV(double q) { return hbar_c / neV_per_eV * q; }

/// Wavenumber q = xi/c [1/nm] of an angular frequency xi [rad/s].
inline constexpr double wavenumber_of(double xi) { return xi / c; }

}  // namespace badlands::units
