#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "badlands/units.hpp"

namespace badlands {

/// Gravity above the mirror. g_bar absorbs the gravitational-to-inertial
/// mass ratio.
struct GravityConfig {
  double g_bar = units::standard_gravity;  // m/s^2
  double mass_mc2 = units::hydrogen_mc2;   // neV

  /// m g_bar in neV/nm.
  double weight() const;
  /// (hbar^2 / (2 m^2 g_bar))^{1/3} in nm.
  double length() const;
};

struct BoundState {
  int n = 0;
  double energy_ideal = 0;               // peV
  std::complex<double> energy_shifted;   // peV
  double lifetime = 0;                   // s
};

/// E_n = m g_bar l_grav |a_n| in peV.
double gbs_energy(const GravityConfig& cfg, int n);

/// E_n + m g_bar a, energies in peV, a in nm; requires Im(a) < 0.
std::complex<double> shifted_energy(double energy_peV, std::complex<double> a, const GravityConfig& cfg);

/// hbar / (2 m g_bar |Im a|); +inf when Im(a) = 0.
double gbs_lifetime(std::complex<double> a, const GravityConfig& cfg);

std::vector<BoundState> bound_states(const GravityConfig& cfg, std::complex<double> a, int count);

struct LifetimeRow {
  std::string material;
  double porosity = 0;
  std::complex<double> a;  // nm
  double lifetime = 0;     // s
};

/// CSV: material,porosity,re_a_nm,im_a_nm,lifetime_s.
void write_lifetimes_csv(std::ostream& out, const std::vector<LifetimeRow>& rows);

/// Aligned text table with one column per surface and a lifetime row.
void write_lifetimes_table(std::ostream& out, const std::vector<LifetimeRow>& rows);

}  // namespace badlands
