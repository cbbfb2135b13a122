#include "badlands/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "badlands/errors.hpp"

namespace badlands {

double schwarzian(const MapJet& j) {
  const double a = j.d2 / j.d1;
  return j.d3 / j.d1 - 1.5 * a * a;
}

namespace {

// Ridders extrapolation of a central-difference estimate D(h) with an
// even error series in h.
template <class D>
double ridders(D&& estimate, double h0) {
  constexpr int kSize = 12;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  double a[kSize][kSize];
  double h = h0;
  double best = estimate(h), err = std::numeric_limits<double>::max();
  a[0][0] = best;
  for (int i = 1; i < kSize; ++i) {
    h /= kCon;
    a[0][i] = estimate(h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * err) break;
  }
  return best;
}

}  // namespace

MapJet numeric_jet(const std::function<double(double)>& f, double z) {
  const double h0 = 0.2 * std::max(1.0, std::abs(z));
  const double f0 = f(z);
  MapJet j;
  j.d1 = ridders([&](double h) { return (f(z + h) - f(z - h)) / (2 * h); }, h0);
  j.d2 = ridders([&](double h) { return (f(z + h) - 2 * f0 + f(z - h)) / (h * h); }, h0);
  j.d3 = ridders([&](double h) {
    return (f(z + 2 * h) - 2 * f(z + h) + 2 * f(z - h) - f(z - 2 * h)) / (2 * h * h * h);
  }, h0);
  return j;
}

double schwarzian(const std::function<double(double)>& f, double z) { return schwarzian(numeric_jet(f, z)); }

double cayley_compose_check(const std::function<double(double)>& map1, const std::function<double(double)>& map2,
                            std::span<const double> points) {
  const std::function<double(double)> composed = [&](double z) { return map2(map1(z)); };
  double worst = 0;
  for (double z : points) {
    const MapJet inner = numeric_jet(map1, z);
    const double lhs = schwarzian(composed, z);
    const double rhs = inner.d1 * inner.d1 * schwarzian(map2, map1(z)) + schwarzian(inner);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double badlands(const ScatteringProblem& problem, double z) {
  if (!(z > 0)) throw DomainError("badlands: z must be > 0");
  const FJet f = problem.f_jet(z);
  if (!(f.f > 0)) throw DomainError("badlands: classical turning point (F <= 0)");
  return badlands_of(f);
}

MapJet wkb_phase_jet(const FJet& f) {
  const double k = std::sqrt(f.f);
  return {k, f.d1 / (2 * k), f.d2 / (2 * k) - f.d1 * f.d1 / (4 * f.f * k)};
}

CoordinateMap wkb_phase_map(const ScatteringProblem& problem) {
  CoordinateMap m;
  m.forward = [problem](double z) { return wkb_phase(problem, z); };
  m.derivative = [problem](double z) { return std::sqrt(local_F(problem, z)); };
  m.inverse = [problem](double target) {
    double lo = 1.0, hi = 1.0;
    while (wkb_phase(problem, lo) > target) lo *= 0.5;
    while (wkb_phase(problem, hi) < target) hi *= 2.0;
    // Newton in ln z, safeguarded by the bracket.
    double x = std::log(std::sqrt(lo * hi)), xl = std::log(lo), xh = std::log(hi);
    for (int it = 0; it < 200; ++it) {
      const double z = std::exp(x);
      const double g = wkb_phase(problem, z) - target;
      if (g < 0) xl = x; else xh = x;
      double next = x - g / (z * std::sqrt(local_F(problem, z)));
      if (!(next > xl && next < xh)) next = 0.5 * (xl + xh);
      if (std::abs(next - x) < 1e-15 * std::max(1.0, std::abs(x)) || xh - xl < 1e-15) return std::exp(next);
      x = next;
    }
    throw NumericalError("wkb_phase_map: inverse did not converge", xh - xl);
  };
  return m;
}

namespace {

LiouvilleSample sample_at(const ScatteringProblem& problem, double z, double zbold, double identity_tol) {
  const FJet f = problem.f_jet(z);
  if (!(f.f > 0)) throw DomainError("liouville_transform: classical turning point (F <= 0)");
  const double q = badlands_of(f);
  const MapJet m = wkb_phase_jet(f);
  // Transformed F from the forward-map Schwarzian and from the inverse map.
  const double forward = (f.f - 0.5 * schwarzian(m)) / (m.d1 * m.d1);
  const MapJet inv{1.0 / m.d1, -m.d2 / (m.d1 * m.d1 * m.d1),
                   -m.d3 / std::pow(m.d1, 4) + 3.0 * m.d2 * m.d2 / std::pow(m.d1, 5)};
  const double backward = f.f * inv.d1 * inv.d1 + 0.5 * schwarzian(inv);
  const double scale = std::max(1.0, std::abs(q));
  if (std::abs(forward - (1.0 - q)) > identity_tol * scale || std::abs(backward - (1.0 - q)) > identity_tol * scale)
    throw InternalError("liouville_transform: transformed F differs from 1 - Q");
  return {z, zbold, q, f.f};
}

}  // namespace

LiouvilleProblem liouville_transform(const ScatteringProblem& problem, const LiouvilleOptions& opt) {
  if (opt.samples_per_decade < 4) throw DomainError("liouville_transform: need >= 4 samples per decade");
  const double cut = opt.barrier_cut;
  double zl = problem.window().z_min, zr = problem.window().z_max;
  while (std::abs(badlands(problem, zl)) >= cut) {
    zl *= 0.5;
    if (zl < 1e-200) throw NumericalError("liouville_transform: barrier does not vanish at the surface", zl);
  }
  while (std::abs(badlands(problem, zr)) >= cut ||
         problem.wavenumber() * zr < 2.0 * problem.wavenumber() * zl + 10.0) {
    zr *= 2.0;
    if (zr > 1e15) throw NumericalError("liouville_transform: barrier does not vanish far away", zr);
  }

  const double decades = std::log10(zr / zl);
  const auto n = static_cast<std::size_t>(std::ceil(decades * opt.samples_per_decade)) + 1;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = zl * std::pow(zr / zl, static_cast<double>(i) / (n - 1));
  z.front() = zl;
  z.back() = zr;

  std::vector<double> phase(n);
  phase[n - 1] = wkb_phase(problem, zr);
  for (std::size_t i = n - 1; i-- > 0;) phase[i] = phase[i + 1] - wkb_phase_difference(problem, z[i], z[i + 1]);

  LiouvilleProblem lp{problem, 1.0, zl, zr, phase.front(), phase.back(), cut, {}, {}};
  lp.samples.reserve(n);
  std::size_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    lp.samples.push_back(sample_at(problem, z[i], phase[i], opt.identity_tol));
    if (lp.samples[i].barrier > lp.samples[top].barrier) top = i;
  }

  const double a = std::log(z[top > 0 ? top - 1 : 0]), b = std::log(z[std::min(top + 1, n - 1)]);
  const auto best = boost::math::tools::brent_find_minima(
      [&](double x) { return -badlands(problem, std::exp(x)); }, a, b, 40);
  const double zp = std::exp(best.first);
  if (-best.second > lp.samples[top].barrier) {
    const FJet f = problem.f_jet(zp);
    lp.peak = {zp, phase[top] + wkb_phase_difference(problem, z[top], zp), -best.second, f.f};
  } else {
    lp.peak = lp.samples[top];
  }
  return lp;
}

namespace {

// Uniform-step renormalized Numerov march of the ratio R_n = F_{n+1}/F_n
// with F = (1 - T) psi, T = -h^2 (1 - Q)/12.
struct NumerovMarch {
  const ScatteringProblem& problem;
  double h;

  double coefficient(double z) const {
    const FJet f = problem.f_jet(z);
    if (!(f.f > 0)) throw DomainError("scatter_transformed: classical turning point (F <= 0)");
    const double t = -h * h * (1.0 - badlands_of(f)) / 12.0;
    return (2.0 + 10.0 * t) / (1.0 - t);
  }

  double slope(double z) const { return 1.0 / std::sqrt(local_F(problem, z)); }

  // One RK4 step of dz/dzbold = F^{-1/2}.
  double advance(double z) const {
    const double k1 = slope(z);
    const double k2 = slope(z + 0.5 * h * k1);
    const double k3 = slope(z + 0.5 * h * k2);
    const double k4 = slope(z + h * k3);
    return z + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  }
};

double propagation_angle(double u) {
  if (!(std::abs(u) < 2.0)) throw NumericalError("scatter_transformed: end region is not propagating", u);
  return std::acos(0.5 * u);
}

}  // namespace

ReflectionResult scatter_transformed(const LiouvilleProblem& lp, NumerovSettings settings) {
  if (!(settings.step > 0 && settings.step < 0.5) || !(settings.tail_step >= settings.step && settings.tail_step < 1.0))
    throw DomainError("scatter_transformed: need 0 < step <= tail_step < 1");
  const ScatteringProblem& problem = lp.source;
  const auto& smp = lp.samples;
  if (smp.size() < 2) throw DomainError("scatter_transformed: transformed grid too small");

  // Zones: coarse left tail up to the last sample with |Q| < tail_cut, fine
  // beyond. The switch sits on a sample so z(zbold) is re-anchored there.
  std::size_t sw = 0;
  while (sw + 1 < smp.size() && std::abs(smp[sw + 1].barrier) < settings.tail_cut) ++sw;
  if (sw + 1 >= smp.size()) sw = 0;
  double peak = 1.0;
  for (const auto& p : smp) peak = std::max(peak, std::abs(1.0 - p.barrier));
  const double fine = std::min(settings.step, settings.phase_per_step / std::sqrt(peak));

  const double i_span = smp.back().zbold - smp[sw].zbold;
  const auto n_fine = static_cast<long>(std::ceil(i_span / fine));
  if (n_fine < 4) throw DomainError("scatter_transformed: transformed domain too short");

  const std::complex<double> i(0.0, 1.0);
  std::complex<double> ratio;
  double log_amp = 0;  // ln |F| at the current node, F = 1 at the left end
  double flux_left = 0;

  if (sw > 0) {
    const double t_span = smp[sw].zbold - smp.front().zbold;
    const auto n_tail = std::max<long>(2, static_cast<long>(std::ceil(t_span / settings.tail_step)));
    NumerovMarch m{problem, t_span / static_cast<double>(n_tail)};
    double z = smp.front().z;
    double u = m.coefficient(z);
    const double theta = propagation_angle(u);
    flux_left = std::sin(theta);
    ratio = std::polar(1.0, -theta);
    for (long n = 0; n < n_tail; ++n) {
      ratio = u - 1.0 / ratio;
      log_amp += std::log(std::abs(ratio));
      z = (n + 1 == n_tail) ? smp[sw].z : m.advance(z);
      u = m.coefficient(z);
    }
    // Restart as the fine-grid outgoing wave carrying the same flux.
    const double theta_c = propagation_angle(u);
    NumerovMarch f{problem, i_span / static_cast<double>(n_fine)};
    const double theta_f = propagation_angle(f.coefficient(smp[sw].z));
    log_amp += 0.5 * std::log(std::sin(theta_c) / std::sin(theta_f));
    ratio = std::polar(1.0, -theta_f);
  }

  NumerovMarch m{problem, i_span / static_cast<double>(n_fine)};
  double z = smp[sw].z;
  double u = m.coefficient(z);
  if (sw == 0) {
    const double theta = propagation_angle(u);
    flux_left = std::sin(theta);
    ratio = std::polar(1.0, -theta);
  }
  for (long n = 0; n + 1 < n_fine; ++n) {
    ratio = u - 1.0 / ratio;
    log_amp += std::log(std::abs(ratio));
    z = m.advance(z);
    u = m.coefficient(z);
  }
  // ratio = F_{N-1}/F_{N-2}; one more step gives F_N/F_{N-1}.
  ratio = u - 1.0 / ratio;
  const double theta = propagation_angle(u);
  const std::complex<double> eplus = std::polar(1.0, theta), eminus = std::polar(1.0, -theta);
  const std::complex<double> x = (eplus - ratio) / (2.0 * i * std::sin(theta));
  const std::complex<double> y = (ratio - eminus) / (2.0 * i * std::sin(theta));
  const double zbold_ref = smp[sw].zbold + m.h * static_cast<double>(n_fine - 1);

  ReflectionResult res;
  res.window = {lp.z_left, z};
  res.r = y / x * std::polar(1.0, -2.0 * zbold_ref);
  res.probability = std::norm(y / x);
  res.transmitted_flux_fraction = flux_left / (std::sin(theta) * std::norm(x)) * std::exp(-2.0 * log_amp);
  res.flux_deficit = 1.0 - res.probability - res.transmitted_flux_fraction;
  return res;
}

std::complex<double> wronskian(std::complex<double> psi1, std::complex<double> dpsi1, std::complex<double> psi2,
                               std::complex<double> dpsi2) {
  return psi1 * dpsi2 - dpsi1 * psi2;
}

WavePoint to_transformed_frame(const WavePoint& w, const MapJet& map) {
  if (!(map.d1 > 0)) throw DomainError("to_transformed_frame: map derivative must be > 0");
  const double s = std::sqrt(map.d1);
  const double ds = map.d2 / (2.0 * s);
  return {s * w.psi, (ds * w.psi + s * w.dpsi) / map.d1};
}

void write_badlands_csv(std::ostream& out, const LiouvilleProblem& lp) {
  std::ostringstream s;
  s.precision(12);
  s << "z_nm,phase_zbold,Q,F\n";
  for (const auto& p : lp.samples) s << p.z << "," << p.zbold << "," << p.barrier << "," << p.F << "\n";
  out << s.str();
}

}  // namespace badlands
