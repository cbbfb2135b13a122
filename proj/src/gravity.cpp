#include "badlands/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "badlands/airy.hpp"
#include "badlands/errors.hpp"

namespace badlands {

double GravityConfig::weight() const {
  if (!(g_bar > 0)) throw DomainError("GravityConfig: g_bar must be > 0");
  const double c = units::c;
  return mass_mc2 * g_bar * units::nm_per_m / (c * c);
}

double GravityConfig::length() const {
  return std::cbrt(units::hbar_c * units::hbar_c / (2.0 * mass_mc2 * weight()));
}

double gbs_energy(const GravityConfig& cfg, int n) {
  return cfg.weight() * cfg.length() * std::abs(airy_zero(n)) * units::peV_per_neV;
}

std::complex<double> shifted_energy(double energy_peV, std::complex<double> a, const GravityConfig& cfg) {
  if (!(a.imag() < 0)) throw DomainError("shifted_energy: Im(a) must be < 0");
  return energy_peV + cfg.weight() * a * units::peV_per_neV;
}

double gbs_lifetime(std::complex<double> a, const GravityConfig& cfg) {
  if (a.imag() == 0) return std::numeric_limits<double>::infinity();
  return units::hbar / (2.0 * cfg.weight() * std::abs(a.imag()));
}

std::vector<BoundState> bound_states(const GravityConfig& cfg, std::complex<double> a, int count) {
  std::vector<BoundState> out;
  for (int n = 1; n <= count; ++n) {
    const double e = gbs_energy(cfg, n);
    out.push_back({n, e, shifted_energy(e, a, cfg), gbs_lifetime(a, cfg)});
  }
  return out;
}

namespace {

std::string lifetime_text(double tau, int precision) {
  if (std::isinf(tau)) return "stable";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << tau;
  return s.str();
}

}  // namespace

void write_lifetimes_csv(std::ostream& out, const std::vector<LifetimeRow>& rows) {
  std::ostringstream s;
  s.precision(10);
  s << "material,porosity,re_a_nm,im_a_nm,lifetime_s\n";
  for (const auto& r : rows) {
    s << r.material << "," << r.porosity << "," << r.a.real() << "," << r.a.imag() << ",";
    if (std::isinf(r.lifetime)) s << "inf"; else s << r.lifetime;
    s << "\n";
  }
  out << s.str();
}

void write_lifetimes_table(std::ostream& out, const std::vector<LifetimeRow>& rows) {
  const std::string first_head = "mirror", first_row = "lifetime (s)";
  const std::size_t first = std::max(first_head.size(), first_row.size());
  std::vector<std::size_t> width;
  for (const auto& r : rows) width.push_back(std::max<std::size_t>(r.material.size(), 8));
  std::ostringstream s;
  s << std::left << std::setw(static_cast<int>(first)) << first_head;
  for (std::size_t i = 0; i < rows.size(); ++i)
    s << " | " << std::right << std::setw(static_cast<int>(width[i])) << rows[i].material;
  s << "\n" << std::left << std::setw(static_cast<int>(first)) << first_row;
  for (std::size_t i = 0; i < rows.size(); ++i)
    s << " | " << std::right << std::setw(static_cast<int>(width[i])) << lifetime_text(rows[i].lifetime, 2);
  s << "\n";
  out << s.str();
}

}  // namespace badlands
