#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "badlands/potential.hpp"
#include "badlands/units.hpp"

namespace badlands {

/// Integration interval [z_min, z_max] in nm.
struct Window {
  double z_min = 0;
  double z_max = 0;
};

struct ScatteringTolerances {
  double ode_rel = 1e-12;         // amplitude ODE, relative
  double ode_abs = 1e-13;         // amplitude ODE, absolute
  double window = 1e-8;           // |delta r| between successive window extensions
  double badlands_edge = 1e-8;    // |Q(z_min)|
  double potential_edge = 1e-10;  // |V(z_max)| / E
  int max_extensions = 10;
};

/// F = (2m/hbar^2)(E - V) and its z-derivatives, 1/nm^2, 1/nm^3, 1/nm^4.
struct FJet {
  double f = 0;
  double d1 = 0;
  double d2 = 0;
};

/// Q = F''/(4F^2) - 5F'^2/(16F^3).
inline double badlands_of(const FJet& j) {
  return j.d2 / (4.0 * j.f * j.f) - 5.0 * j.d1 * j.d1 / (16.0 * j.f * j.f * j.f);
}

/// Drop height [m] to kinetic energy [neV], E = m g h.
double energy_of_height(double height_m, double g = units::standard_gravity,
                        double mass_mc2 = units::hydrogen_mc2);

/// Weight m g in neV per metre.
double weight_neV_per_m(double g = units::standard_gravity, double mass_mc2 = units::hydrogen_mc2);

/// Schrodinger scattering on an attractive potential with full absorption at
/// the surface. The default window satisfies |Q(z_min)| < badlands_edge deep
/// in the potential-dominated region and |V(z_max)|/E < potential_edge.
class ScatteringProblem {
 public:
  ScatteringProblem(PotentialPtr potential, double energy_neV, ScatteringTolerances tol = {},
                    std::optional<Window> window = std::nullopt, double mass_mc2 = units::hydrogen_mc2);

  static ScatteringProblem at_height(PotentialPtr potential, double height_m, ScatteringTolerances tol = {},
                                     std::optional<Window> window = std::nullopt);

  double energy() const { return energy_; }
  double mass_mc2() const { return mass_; }
  /// 2m/hbar^2 in 1/(neV nm^2).
  double kinetic_scale() const { return scale_; }
  /// Far-field wavenumber sqrt(2mE)/hbar, 1/nm.
  double wavenumber() const;
  const Window& window() const { return window_; }
  const ScatteringTolerances& tolerances() const { return tol_; }
  const Potential& potential() const { return *potential_; }
  const PotentialPtr& potential_ptr() const { return potential_; }

  FJet f_jet(double z) const;
  double badlands(double z) const { return badlands_of(f_jet(z)); }

  ScatteringProblem with_window(Window w) const;
  ScatteringProblem with_tolerances(ScatteringTolerances t) const;

 private:
  PotentialPtr potential_;
  double energy_;
  double mass_;
  double scale_;
  ScatteringTolerances tol_;
  Window window_;
};

/// F(z) in 1/nm^2; DomainError when F <= 0.
double local_F(const ScatteringProblem& problem, double z);

/// WKB phase with the constant fixed by phi(z) - k z -> 0 as z -> inf.
double wkb_phase(const ScatteringProblem& problem, double z);

/// int_a^b k_dB dz.
double wkb_phase_difference(const ScatteringProblem& problem, double a, double b);

struct ReflectionResult {
  std::complex<double> r;
  double probability = 0;
  double transmitted_flux_fraction = 0;
  double flux_deficit = 0;  // 1 - |r|^2 - T
  std::vector<double> window_convergence;
  Window window;
};

/// Amplitude equations b'_+- = (k'/2k) e^{-+2i phi} b_-+ from z_min
/// (b_- = 1, b_+ at its adiabatic value i F'/(8 F k)) to z_max, with window extension until |delta r| meets
/// the window tolerance.
ReflectionResult integrate_amplitudes(const ScatteringProblem& problem);

/// One solve on the problem's window, no extension.
ReflectionResult integrate_amplitudes_fixed(const ScatteringProblem& problem);

struct CurvePoint {
  double height_m = 0;
  double energy_neV = 0;
  ReflectionResult result;
};

std::vector<CurvePoint> reflection_curve(const PotentialPtr& potential, const std::vector<double>& heights_m,
                                         ScatteringTolerances tol = {}, unsigned threads = 0);

/// CSV: h_m,E_neV,re_r,im_r,prob_reflect,flux_deficit.
void write_reflection_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

struct ScatteringLengthSample {
  double height_m = 0;
  double wavenumber = 0;  // 1/nm
  std::complex<double> r;
  std::complex<double> log_minus_r;  // branch-tracked
  std::complex<double> a;            // nm
};

struct ScatteringLength {
  std::complex<double> a;  // nm
  double residual = 0;     // relative disagreement of extrapolation orders
  std::vector<ScatteringLengthSample> samples;
};

struct ScatteringLengthOptions {
  std::vector<double> heights_m{1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  double residual_tol = 1e-3;
  ScatteringTolerances tol{};
  unsigned threads = 0;
};

/// a = lim (i/2k) log(-r) extrapolated to k = 0.
ScatteringLength scattering_length(const PotentialPtr& potential, const ScatteringLengthOptions& opt = {});

/// Branch-continuous logs: principal at index 0, then each value is shifted
/// by 2 pi i to stay nearest to L_{j-1} k_j / k_{j-1}.
std::vector<std::complex<double>> track_log_branch(const std::vector<std::complex<double>>& values,
                                                   const std::vector<double>& k);

/// Polynomial (Neville) extrapolation of samples y(x) to x = 0.
std::complex<double> extrapolate_to_zero(const std::vector<double>& x, const std::vector<std::complex<double>>& y);

}  // namespace badlands
