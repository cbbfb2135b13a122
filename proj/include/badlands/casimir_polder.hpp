#pragma once

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <iosfwd>
#include <string>
#include <vector>

#include "badlands/material.hpp"
#include "badlands/potential.hpp"

namespace badlands {

/// Retarded ideal-mirror reference V*(z) = -c4_star / z^4.
struct IdealReference {
  double c4_star = 0;  // neV nm^4

  double operator()(double z) const { return -c4_star / (z * z * z * z); }
};

/// c4_star = 3 hbar c alpha(0) / (8 pi).
IdealReference ideal_reference(const AtomPolarizability& pol);

/// Characteristic length sqrt(2 m C4)/hbar of a -C4/z^4 potential, nm.
double cp_length(double c4, double mass_mc2);

/// Exact short-distance coefficient C3 = (hbar/4pi) int alpha (eps-1)/(eps+1) dxi.
double van_der_waals_c3(const MaterialModel& material, const AtomPolarizability& pol, double rel_tol = 1e-10);

/// xi^2 alpha(i xi) (e^{-2 kappa z}/kappa) [rho_TE - (1 + 2c^2k^2/xi^2) rho_TM].
/// Units: s^-2 nm^2. The potential is (hbar/c^2) int dxi int d^2k/(2pi)^2 of it.
double cp_integrand(const MaterialModel& material, const AtomPolarizability& pol, double xi, double k_perp,
                    double z);

/// Casimir-Polder potential V(z) in neV, z in nm.
double cp_potential_point(const MaterialModel& material, const AtomPolarizability& pol, double z,
                          double rel_tol = 1e-6);

/// Tabulated V(z) on a log-spaced grid. Inside the grid V is a cubic spline
/// in (ln z, ln(-V)) with end slopes -3 and -4; outside it is the power law
/// -V_end (z_end/z)^n anchored at the end samples, so V is continuous.
class PotentialTable final : public Potential {
 public:
  PotentialTable(std::string material, std::vector<double> z_grid, std::vector<double> values, double c4_star,
                 double tolerance = 0);

  PotentialJet jet(double z) const override;
  std::string describe() const override { return "cp-table(" + material_ + ")"; }
  // Every knot: the spline is only C2, so V' has kinks there.
  std::vector<double> breakpoints() const override { return z_; }

  const std::string& material() const { return material_; }
  const std::vector<double>& z_grid() const { return z_; }
  const std::vector<double>& values() const { return v_; }
  double c3() const { return c3_; }
  double c4() const { return c4_; }
  double c4_star() const { return c4_star_; }
  double c3_residual() const { return c3_residual_; }
  double c4_residual() const { return c4_residual_; }
  double z_low() const { return z_.front(); }
  double z_high() const { return z_.back(); }
  double tolerance() const { return tolerance_; }

  /// Local log-log slope d ln(-V) / d ln z.
  double log_slope(double z) const;

 private:
  std::string material_;
  std::vector<double> z_;
  std::vector<double> v_;
  double c3_ = 0, c4_ = 0, c4_star_ = 0;
  double c3_residual_ = 0, c4_residual_ = 0;
  double tolerance_ = 0;
  double x_low_ = 0, x_high_ = 0;  // spline range in ln z
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
};

struct TableSpec {
  double z_min = 1e-2;  // nm
  double z_max = 1e5;   // nm
  int points = 281;
  double rel_tol = 1e-6;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Fits c3 over the smallest decade and c4 over the largest; a fit residual
/// above 1% throws NumericalError.
PotentialTable build_potential_table(const MaterialModel& material, const AtomPolarizability& pol,
                                     const TableSpec& spec = {});

PotentialTable build_potential_table(const MaterialModel& material, const AtomPolarizability& pol, double z_min,
                                     double z_max, int n_points);

/// V(z)/V*(z).
double ratio_to_ideal(const PotentialTable& table, double z);

/// CSV: comment header with material, c3, c4, c4_star, tolerance, then
/// z_nm,V_neV,ratio_to_ideal for each grid point.
void write_potential_csv(std::ostream& out, const PotentialTable& table);

}  // namespace badlands
