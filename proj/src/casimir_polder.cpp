#include "badlands/casimir_polder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "badlands/errors.hpp"
#include "badlands/parallel.hpp"
#include "badlands/quadrature.hpp"
#include "badlands/units.hpp"

namespace badlands {

namespace {

// Polarizability as a function of q = xi/c [1/nm].
double alpha_of_q(const AtomPolarizability& pol, double q) {
  const double x = units::photon_energy_eV(q) / pol.resonance_eV;
  return pol.static_nm3 / (1.0 + x * x);
}

// G(p) = rho_TE - (2p^2 - 1) rho_TM at kappa = q p.
double bracket(double eps, double p) {
  if (std::isinf(eps)) return -2.0 * p * p;
  const FresnelPair r = fresnel_from_ratio(eps, p);
  return r.rho_te - (2.0 * p * p - 1.0) * r.rho_tm;
}

// J(a) = e^{a} int_1^inf e^{-a p} G(p) dp.
double inner_integral(double a, double eps, double tol) {
  if (std::isinf(eps)) {
    const auto& rule = quad::gauss_laguerre(8);
    return quad::laguerre_sum(rule, [&](double t) { return bracket(eps, 1.0 + t / a); }) / a;
  }
  // Head on [0, s] by Gauss-Kronrod, tail by shifted Gauss-Laguerre. G is
  // polynomial-like once p exceeds sqrt(eps), so the tail rule converges fast.
  double s = std::min(4.0 * std::sqrt(eps), 40.0 / a);
  for (int attempt = 0; attempt < 6; ++attempt, s *= 2) {
    const auto head = quad::kronrod([&](double u) { return std::exp(-a * u) * bracket(eps, 1.0 + u); }, 0.0, s,
                                    tol, 18);
    auto tail = [&](int n) {
      return quad::laguerre_sum(quad::gauss_laguerre(n), [&](double t) { return bracket(eps, 1.0 + s + t / a); });
    };
    const double scale = std::exp(-a * s) / a;
    const double t32 = scale * tail(32);
    const double t48 = scale * tail(48);
    const double total = head.value + t48;
    if (std::abs(t48 - t32) <= tol * std::abs(total) + 1e-300) return total;
  }
  throw NumericalError("cp_potential_point: inner kappa integral did not converge", tol);
}

}  // namespace

IdealReference ideal_reference(const AtomPolarizability& pol) {
  return {3.0 * units::hbar_c * pol.static_nm3 / (8.0 * units::pi)};
}

double cp_length(double c4, double mass_mc2) { return std::sqrt(2.0 * mass_mc2 * c4) / units::hbar_c; }

double van_der_waals_c3(const MaterialModel& material, const AtomPolarizability& pol, double rel_tol) {
  auto integrand = [&](double q) {
    double ratio = 1.0;
    if (!material.perfect()) {
      const double eps = epsilon_at_energy(material, units::photon_energy_eV(q));
      ratio = std::isinf(eps) ? 1.0 : (eps - 1.0) / (eps + 1.0);
    }
    return alpha_of_q(pol, q) * ratio;
  };
  const double qs = pol.resonance_eV / (units::hbar_c / units::neV_per_eV);
  const auto r = quad::kronrod([&](double t) {
    const double u = 1.0 - t;
    return integrand(qs * t / u) * qs / (u * u);
  }, 0.0, 1.0, rel_tol);
  return units::hbar_c / (4.0 * units::pi) * r.value;
}

double cp_integrand(const MaterialModel& material, const AtomPolarizability& pol, double xi, double k_perp,
                    double z) {
  if (!(z > 0)) throw DomainError("cp_integrand: z must be > 0");
  if (!(xi >= 0) || !(k_perp >= 0)) throw DomainError("cp_integrand: xi and k_perp must be >= 0");
  const FresnelPair r = fresnel_amplitudes(material, xi, k_perp);
  const double q = units::wavenumber_of(xi);
  const double kappa = std::sqrt(k_perp * k_perp + q * q);
  const double c2 = units::c * units::c;
  // xi^2 [rho_TE - (1 + 2c^2k^2/xi^2) rho_TM], finite at xi = 0.
  const double b = xi * xi * r.rho_te - (xi * xi + 2.0 * c2 * k_perp * k_perp) * r.rho_tm;
  return atom_polarizability(pol, xi) * std::exp(-2.0 * kappa * z) / kappa * b;
}

double cp_potential_point(const MaterialModel& material, const AtomPolarizability& pol, double z, double rel_tol) {
  if (!(z > 0)) throw DomainError("cp_potential_point: z must be > 0");
  if (!(rel_tol > 0)) throw DomainError("cp_potential_point: tolerance must be > 0");
  const double inner_tol = std::max(1e-3 * rel_tol, 1e-14);
  const double q_atom = pol.resonance_eV / (units::hbar_c / units::neV_per_eV);
  const double qs = std::min(q_atom, 0.5 / z);

  auto outer = [&](double t) {
    const double u = 1.0 - t;
    const double q = qs * t / u;
    const double a = 2.0 * q * z;
    const double decay = std::exp(-a);
    if (decay == 0.0 || q == 0.0) return 0.0;
    const double eps = material.perfect() ? std::numeric_limits<double>::infinity()
                                          : epsilon_at_energy(material, units::photon_energy_eV(q));
    return q * q * q * alpha_of_q(pol, q) * decay * inner_integral(a, eps, inner_tol) * qs / (u * u);
  };
  const auto r = quad::kronrod(outer, 0.0, 1.0, rel_tol, 20);
  const double v = units::hbar_c / (2.0 * units::pi) * r.value;
  const double achieved = std::abs(r.error / r.value);
  if (!(achieved <= rel_tol) || !std::isfinite(v))
    throw NumericalError("cp_potential_point: xi quadrature did not converge", achieved);
  if (!(v < 0)) throw InternalError("cp_potential_point: non-negative potential");
  return v;
}

namespace {

struct PowerFit {
  double coefficient = 0;
  double residual = 0;
};

// Slope-constrained fit of -V = C z^-n over grid points [first, last].
PowerFit fit_power(const std::vector<double>& z, const std::vector<double>& v, std::size_t first, std::size_t last,
                   double n) {
  double mean = 0;
  for (std::size_t i = first; i <= last; ++i) mean += std::log(-v[i]) + n * std::log(z[i]);
  mean /= static_cast<double>(last - first + 1);
  PowerFit fit{std::exp(mean), 0};
  for (std::size_t i = first; i <= last; ++i)
    fit.residual = std::max(fit.residual, std::abs(-v[i] * std::pow(z[i], n) / fit.coefficient - 1.0));
  return fit;
}

constexpr double kFitLimit = 0.01;

}  // namespace

PotentialTable::PotentialTable(std::string material, std::vector<double> z_grid, std::vector<double> values,
                               double c4_star, double tolerance)
    : material_(std::move(material)), z_(std::move(z_grid)), v_(std::move(values)), c4_star_(c4_star),
      tolerance_(tolerance) {
  const std::size_t n = z_.size();
  if (n < 50 || v_.size() != n) throw DomainError("PotentialTable: need >= 50 grid points with matching values");
  if (!(z_.front() > 0)) throw DomainError("PotentialTable: grid must be positive");
  const double step = std::log(z_.back() / z_.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double expect = std::log(z_.front()) + step * static_cast<double>(i);
    if (!(std::abs(std::log(z_[i]) - expect) <= 1e-9 * std::max(1.0, std::abs(expect))))
      throw DomainError("PotentialTable: grid must be log-spaced");
    if (!(v_[i] < 0)) throw NumericalError("PotentialTable: potential must be negative", v_[i]);
    if (i > 0 && !(v_[i] > v_[i - 1]))
      throw NumericalError("PotentialTable: potential must increase toward zero", v_[i] - v_[i - 1]);
  }

  const double decade = std::log(10.0);
  std::size_t low_last = 0, high_first = n - 1;
  while (low_last + 1 < n && std::log(z_[low_last + 1] / z_.front()) <= decade * (1 + 1e-12)) ++low_last;
  while (high_first > 0 && std::log(z_.back() / z_[high_first - 1]) <= decade * (1 + 1e-12)) --high_first;
  if (low_last < 2 || high_first + 2 >= n) throw DomainError("PotentialTable: grid must span at least a decade");

  const PowerFit f3 = fit_power(z_, v_, 0, low_last, 3.0);
  const PowerFit f4 = fit_power(z_, v_, high_first, n - 1, 4.0);
  c3_ = f3.coefficient;
  c4_ = f4.coefficient;
  c3_residual_ = f3.residual;
  c4_residual_ = f4.residual;
  if (c3_residual_ > kFitLimit)
    throw NumericalError("PotentialTable: C3 fit residual above 1% on the smallest decade", c3_residual_);
  if (c4_residual_ > kFitLimit)
    throw NumericalError("PotentialTable: C4 fit residual above 1% on the largest decade", c4_residual_);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(-v_[i]);
  const double left = -3.0, right = -4.0;
  x_low_ = std::log(z_.front());
  x_high_ = x_low_ + step * static_cast<double>(n - 1);
  spline_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(y.data(), n, x_low_, step, left, right);
}

PotentialJet PotentialTable::jet(double z) const {
  if (!(z > 0)) throw DomainError("PotentialTable: z must be > 0");
  double y, y1, y2;
  if (z <= z_.front()) {
    y1 = -3.0;
    y2 = 0.0;
    y = std::log(-v_.front()) + y1 * std::log(z / z_.front());
  } else if (z >= z_.back()) {
    y1 = -4.0;
    y2 = 0.0;
    y = std::log(-v_.back()) + y1 * std::log(z / z_.back());
  } else {
    const double x = std::clamp(std::log(z), x_low_, x_high_);
    y = spline_(x);
    y1 = spline_.prime(x);
    y2 = spline_.double_prime(x);
  }
  const double v = -std::exp(y);
  return {v, v * y1 / z, v * (y2 + y1 * y1 - y1) / (z * z)};
}

double PotentialTable::log_slope(double z) const {
  const PotentialJet j = jet(z);
  return z * j.d1 / j.v;
}

PotentialTable build_potential_table(const MaterialModel& material, const AtomPolarizability& pol,
                                     const TableSpec& spec) {
  if (!(spec.z_min > 0) || !(spec.z_max > spec.z_min))
    throw DomainError("build_potential_table: need 0 < z_min < z_max");
  if (spec.points < 50) throw DomainError("build_potential_table: need at least 50 points");
  const auto n = static_cast<std::size_t>(spec.points);
  const double step = std::log(spec.z_max / spec.z_min) / static_cast<double>(n - 1);
  std::vector<double> z(n), v(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = spec.z_min * std::exp(step * static_cast<double>(i));
  z.back() = spec.z_max;
  parallel_for(n, [&](std::size_t i) { v[i] = cp_potential_point(material, pol, z[i], spec.rel_tol); },
               spec.threads);
  return PotentialTable(material.name, std::move(z), std::move(v), ideal_reference(pol).c4_star, spec.rel_tol);
}

PotentialTable build_potential_table(const MaterialModel& material, const AtomPolarizability& pol, double z_min,
                                     double z_max, int n_points) {
  TableSpec spec;
  spec.z_min = z_min;
  spec.z_max = z_max;
  spec.points = n_points;
  return build_potential_table(material, pol, spec);
}

double ratio_to_ideal(const PotentialTable& table, double z) {
  if (!(z > 0)) throw DomainError("ratio_to_ideal: z must be > 0");
  const double z2 = z * z;
  return -table(z) * z2 * z2 / table.c4_star();
}

void write_potential_csv(std::ostream& out, const PotentialTable& table) {
  std::ostringstream s;
  s.precision(10);
  s << "# material=" << table.material() << " c3_neV_nm3=" << table.c3() << " c4_neV_nm4=" << table.c4()
    << " c4_star_neV_nm4=" << table.c4_star() << " rel_tol=" << table.tolerance() << "\n";
  s << "z_nm,V_neV,ratio_to_ideal\n";
  s.precision(12);
  for (std::size_t i = 0; i < table.z_grid().size(); ++i) {
    const double z = table.z_grid()[i];
    s << z << "," << table.values()[i] << "," << ratio_to_ideal(table, z) << "\n";
  }
  out << s.str();
}

}  // namespace badlands
