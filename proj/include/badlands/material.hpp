#pragma once

#include <optional>
#include <string>
#include <vector>

namespace badlands {

/// Lorentz oscillator on the imaginary axis:
/// strength / (1 + (u/resonance)^2 + damping*u/resonance^2), u = hbar*xi.
struct Oscillator {
  double strength = 0;      // dimensionless
  double resonance_eV = 0;  // > 0
  double damping_eV = 0;    // >= 0
};

/// Free-carrier term plasma^2 / (u^2 + damping*u).
struct DrudeTerm {
  double plasma_eV = 0;
  double damping_eV = 0;
};

enum class MaterialKind { PerfectMirror, OscillatorModel };

struct MaterialModel {
  std::string name;
  MaterialKind kind = MaterialKind::OscillatorModel;
  std::vector<Oscillator> oscillators;
  std::vector<DrudeTerm> drude;
  double porosity = 0;  // vacuum volume fraction, 0 = bulk
  std::string source;   // provenance note carried from the config file
  std::optional<double> static_epsilon;  // documented eps(0) of the bulk fit

  bool perfect() const { return kind == MaterialKind::PerfectMirror; }

  /// Throws ConfigError when fields violate the model invariants.
  void validate() const;

  static MaterialModel perfect_mirror(std::string name = "perfect");
};

/// Single effective-oscillator polarizability, alpha/(4 pi eps0) in nm^3.
struct AtomPolarizability {
  double static_nm3 = 0;
  double resonance_eV = 0;

  static AtomPolarizability hydrogen(double resonance_eV = 12.094);
};

struct FresnelPair {
  double rho_te = 0;
  double rho_tm = 0;
};

/// epsilon(i xi) of a non-perfect material, Bruggeman-mixed with vacuum when
/// porosity > 0. xi in rad/s.
double epsilon_imaginary(const MaterialModel& material, double xi);

/// Same as epsilon_imaginary but parameterised by u = hbar*xi in eV.
double epsilon_at_energy(const MaterialModel& material, double u_eV);

/// Physical root of the Bruggeman two-phase (solid + vacuum) mixing rule.
double bruggeman_effective(double eps_solid, double porosity);

/// Fresnel amplitudes at imaginary frequency xi [rad/s], k_perp [1/nm].
FresnelPair fresnel_amplitudes(const MaterialModel& material, double xi, double k_perp);

/// Fresnel amplitudes from the dielectric value and p = kappa/(xi/c) >= 1.
FresnelPair fresnel_from_ratio(double eps, double p);

/// alpha(i xi)/(4 pi eps0) in nm^3, xi in rad/s.
double atom_polarizability(const AtomPolarizability& pol, double xi);

}  // namespace badlands
