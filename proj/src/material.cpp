#include "badlands/material.hpp"

#include <cmath>
#include <limits>

#include "badlands/errors.hpp"
#include "badlands/units.hpp"

namespace badlands {

void MaterialModel::validate() const {
  if (!(porosity >= 0 && porosity <= 1))
    throw ConfigError("material '" + name + "': porosity must lie in [0,1]");
  if (perfect()) {
    if (porosity > 0) throw ConfigError("material '" + name + "': a perfect mirror cannot be porous");
    return;
  }
  for (const auto& o : oscillators) {
    if (!(o.strength >= 0)) throw ConfigError("material '" + name + "': oscillator strength must be >= 0");
    if (!(o.resonance_eV > 0)) throw ConfigError("material '" + name + "': oscillator resonance must be > 0");
    if (!(o.damping_eV >= 0)) throw ConfigError("material '" + name + "': oscillator damping must be >= 0");
  }
  for (const auto& d : drude) {
    if (!(d.plasma_eV > 0)) throw ConfigError("material '" + name + "': Drude plasma energy must be > 0");
    if (!(d.damping_eV >= 0)) throw ConfigError("material '" + name + "': Drude damping must be >= 0");
  }
}

MaterialModel MaterialModel::perfect_mirror(std::string name) {
  MaterialModel m;
  m.name = std::move(name);
  m.kind = MaterialKind::PerfectMirror;
  return m;
}

AtomPolarizability AtomPolarizability::hydrogen(double resonance_eV) {
  const double a0 = units::bohr_radius;
  return {4.5 * a0 * a0 * a0, resonance_eV};
}

namespace {

double bulk_epsilon(const MaterialModel& material, double u) {
  double eps = 1.0;
  for (const auto& o : material.oscillators) {
    const double x = u / o.resonance_eV;
    eps += o.strength / (1.0 + x * x + o.damping_eV * u / (o.resonance_eV * o.resonance_eV));
  }
  for (const auto& d : material.drude) {
    if (u == 0) return std::numeric_limits<double>::infinity();
    eps += d.plasma_eV * d.plasma_eV / (u * (u + d.damping_eV));
  }
  return eps;
}

}  // namespace

double epsilon_at_energy(const MaterialModel& material, double u_eV) {
  if (!(u_eV >= 0)) throw DomainError("epsilon: frequency must be >= 0");
  if (material.perfect()) throw DomainError("epsilon: perfect mirror has no finite dielectric function");
  const double bulk = bulk_epsilon(material, u_eV);
  if (material.porosity > 0) return bruggeman_effective(bulk, material.porosity);
  return bulk;
}

double epsilon_imaginary(const MaterialModel& material, double xi) {
  if (!(xi >= 0)) throw DomainError("epsilon_imaginary: xi must be >= 0");
  return epsilon_at_energy(material, units::hbar_eV_s * xi);
}

double bruggeman_effective(double eps_solid, double porosity) {
  if (!(eps_solid >= 1)) throw DomainError("bruggeman_effective: eps_solid must be >= 1");
  if (!(porosity >= 0 && porosity <= 1)) throw DomainError("bruggeman_effective: porosity must lie in [0,1]");
  if (porosity == 0) return eps_solid;
  if (porosity == 1 || eps_solid == 1) return 1.0;
  if (std::isinf(eps_solid)) {
    // Perfectly conducting inclusions: the solid term tends to (1 - f), giving
    // eps = 1/(3f - 2) above the percolation threshold f = 2/3.
    if (porosity > 2.0 / 3.0) return 1.0 / (3 * porosity - 2);
    return std::numeric_limits<double>::infinity();
  }

  const double f = porosity;
  auto mismatch = [&](double e) {
    return f * (1 - e) / (1 + 2 * e) + (1 - f) * (eps_solid - e) / (eps_solid + 2 * e);
  };
  // mismatch(1) >= 0 >= mismatch(eps_solid), strictly decreasing in between.
  double lo = 1.0, hi = eps_solid;
  while (hi - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mismatch(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  const double root = 0.5 * (lo + hi);
  if (!(root >= 1 && root <= eps_solid)) throw InternalError("bruggeman_effective: root left [1, eps_solid]");
  return root;
}

FresnelPair fresnel_from_ratio(double eps, double p) {
  if (std::isinf(eps)) return {-1.0, 1.0};
  const double pm = std::sqrt(p * p + eps - 1.0);
  return {-(eps - 1.0) / ((p + pm) * (p + pm)), (eps * p - pm) / (eps * p + pm)};
}

FresnelPair fresnel_amplitudes(const MaterialModel& material, double xi, double k_perp) {
  if (!(xi >= 0) || !(k_perp >= 0)) throw DomainError("fresnel_amplitudes: xi and k_perp must be >= 0");
  if (xi == 0 && k_perp == 0) throw DomainError("fresnel_amplitudes: xi and k_perp cannot both vanish");
  if (material.perfect()) return {-1.0, 1.0};
  const double eps = epsilon_imaginary(material, xi);
  if (std::isinf(eps)) return {-1.0, 1.0};
  const double q = units::wavenumber_of(xi);
  const double kappa = std::sqrt(k_perp * k_perp + q * q);
  const double kappa_m = std::sqrt(k_perp * k_perp + eps * q * q);
  // kappa - kappa_m rewritten to avoid cancellation at grazing k_perp.
  const double te = -(eps - 1.0) * q * q / ((kappa + kappa_m) * (kappa + kappa_m));
  return {te, (eps * kappa - kappa_m) / (eps * kappa + kappa_m)};
}

double atom_polarizability(const AtomPolarizability& pol, double xi) {
  if (!(xi >= 0)) throw DomainError("atom_polarizability: xi must be >= 0");
  const double x = units::hbar_eV_s * xi / pol.resonance_eV;
  return pol.static_nm3 / (1.0 + x * x);
}

}  // namespace badlands
