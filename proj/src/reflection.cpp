#include "badlands/reflection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "badlands/errors.hpp"
#include "badlands/parallel.hpp"
#include "badlands/quadrature.hpp"

namespace badlands {

double weight_neV_per_m(double g, double mass_mc2) {
  const double c = units::c;  // nm/s
  return mass_mc2 * (g * units::nm_per_m) / (c * c) * units::nm_per_m;
}

double energy_of_height(double height_m, double g, double mass_mc2) {
  if (!(height_m > 0)) throw DomainError("drop height must be > 0");
  return weight_neV_per_m(g, mass_mc2) * height_m;
}

namespace {

constexpr double kDeepFactor = 1e3;  // |V| > kDeepFactor * E at z_min

Window auto_window(const Potential& pot, double energy, double scale, const ScatteringTolerances& tol) {
  const auto jumps = pot.discontinuities();
  double z_max = 1.0;
  if (!jumps.empty()) z_max = std::max(z_max, 2.0 * jumps.back());
  while (std::abs(pot(z_max)) >= tol.potential_edge * energy) {
    z_max *= 2.0;
    if (z_max > 1e15) throw NumericalError("auto window: potential tail too slow for |V|/E criterion", z_max);
  }
  double z_min = std::min(1.0, 0.5 * z_max);
  if (!jumps.empty()) z_min = std::min(z_min, 0.5 * jumps.front());
  for (;;) {
    const PotentialJet v = pot.jet(z_min);
    const FJet f{scale * (energy - v.v), -scale * v.d1, -scale * v.d2};
    if (!(f.f > 0)) throw DomainError("auto window: classical turning point (F <= 0)");
    const double q = badlands_of(f);
    if (std::abs(q) < tol.badlands_edge && (std::abs(v.v) >= kDeepFactor * energy || q == 0.0)) break;
    z_min *= 0.5;
    if (z_min < 1e-200) throw NumericalError("auto window: no WKB-exact region near the surface", q);
  }
  return {z_min, z_max};
}

}  // namespace

ScatteringProblem::ScatteringProblem(PotentialPtr potential, double energy_neV, ScatteringTolerances tol,
                                     std::optional<Window> window, double mass_mc2)
    : potential_(std::move(potential)), energy_(energy_neV), mass_(mass_mc2), tol_(tol) {
  if (!potential_) throw DomainError("ScatteringProblem: null potential");
  if (!(energy_ > 0)) throw DomainError("ScatteringProblem: energy must be > 0");
  if (!(mass_ > 0)) throw DomainError("ScatteringProblem: mass must be > 0");
  scale_ = 2.0 * mass_ / (units::hbar_c * units::hbar_c);
  if (window) {
    if (!(window->z_min > 0) || !(window->z_max > window->z_min))
      throw DomainError("ScatteringProblem: window needs 0 < z_min < z_max");
    window_ = *window;
  } else {
    window_ = auto_window(*potential_, energy_, scale_, tol_);
  }
}

ScatteringProblem ScatteringProblem::at_height(PotentialPtr potential, double height_m, ScatteringTolerances tol,
                                               std::optional<Window> window) {
  return ScatteringProblem(std::move(potential), energy_of_height(height_m), tol, window);
}

double ScatteringProblem::wavenumber() const { return std::sqrt(scale_ * energy_); }

FJet ScatteringProblem::f_jet(double z) const {
  const PotentialJet v = potential_->jet(z);
  return {scale_ * (energy_ - v.v), -scale_ * v.d1, -scale_ * v.d2};
}

ScatteringProblem ScatteringProblem::with_window(Window w) const {
  return ScatteringProblem(potential_, energy_, tol_, w, mass_);
}

ScatteringProblem ScatteringProblem::with_tolerances(ScatteringTolerances t) const {
  return ScatteringProblem(potential_, energy_, t, window_, mass_);
}

double local_F(const ScatteringProblem& problem, double z) {
  if (!(z > 0)) throw DomainError("local_F: z must be > 0");
  const double f = problem.f_jet(z).f;
  if (!(f > 0)) throw DomainError("local_F: classical turning point (F <= 0)");
  return f;
}

namespace {

constexpr double kPhaseTol = 1e-12;
constexpr unsigned kPhaseDepth = 12;

// Split points for integrals over [a, b]: non-smooth points plus decades.
std::vector<double> breakpoints(const Potential& pot, double a, double b) {
  std::vector<double> pts{a};
  for (double d : pot.breakpoints())
    if (d > a && d < b) pts.push_back(d);
  for (double z = a * 10.0; z < b; z *= 10.0) pts.push_back(z);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// int_a^b g(z) dz over log-variable pieces.
template <class G>
double log_integral(const Potential& pot, double a, double b, G&& g) {
  const auto pts = breakpoints(pot, a, b);
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto piece = quad::kronrod([&](double x) {
      const double z = std::exp(x);
      return g(z) * z;
    }, std::log(pts[i]), std::log(pts[i + 1]), kPhaseTol, kPhaseDepth);
    total += piece.value;
  }
  return total;
}

}  // namespace

double wkb_phase(const ScatteringProblem& problem, double z) {
  if (!(z > 0)) throw DomainError("wkb_phase: z must be > 0");
  const double k = problem.wavenumber();
  const double s = problem.kinetic_scale();
  // k_dB - k without cancellation.
  auto excess = [&](double x) {
    const double v = problem.potential()(x);
    if (v == 0.0) return 0.0;
    const double f = s * (problem.energy() - v);
    if (!(f > 0)) throw DomainError("wkb_phase: classical turning point (F <= 0)");
    return -s * v / (std::sqrt(f) + k);
  };
  double z_end = std::max(z, problem.window().z_max);
  const auto kinks = problem.potential().breakpoints();
  if (!kinks.empty()) z_end = std::max(z_end, kinks.back());
  z_end *= 10.0;
  double tail = log_integral(problem.potential(), z, z_end, excess);
  // Remaining tail via z = z_end / u.
  tail += quad::kronrod([&](double u) { return excess(z_end / u) * z_end / (u * u); }, 0.0, 1.0, kPhaseTol,
                        kPhaseDepth).value;
  return k * z - tail;
}

double wkb_phase_difference(const ScatteringProblem& problem, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw DomainError("wkb_phase_difference: z must be > 0");
  if (a == b) return 0.0;
  if (a > b) return -wkb_phase_difference(problem, b, a);
  return log_integral(problem.potential(), a, b, [&](double z) { return std::sqrt(local_F(problem, z)); });
}

namespace {

using State = std::array<double, 5>;  // Re b+, Im b+, Re b-, Im b-, phase

struct AmplitudeRhs {
  const ScatteringProblem* problem;
  // Current segment; z is kept strictly inside so a jump at either end is
  // never sampled from the wrong side.
  double lo = 0, hi = std::numeric_limits<double>::infinity();

  void operator()(const State& s, State& ds, double x) const {
    const double z = std::clamp(std::exp(x), lo, hi);
    const FJet f = problem->f_jet(z);
    if (!(f.f > 0)) throw DomainError("integrate_amplitudes: classical turning point (F <= 0)");
    const double w = z * f.d1 / (4.0 * f.f);  // z k'/(2k)
    const double c = std::cos(2.0 * s[4]), sn = std::sin(2.0 * s[4]);
    // b+' = w e^{-2i phi} b-, b-' = w e^{2i phi} b+
    ds[0] = w * (c * s[2] + sn * s[3]);
    ds[1] = w * (c * s[3] - sn * s[2]);
    ds[2] = w * (c * s[0] - sn * s[1]);
    ds[3] = w * (c * s[1] + sn * s[0]);
    ds[4] = z * std::sqrt(f.f);
  }
};

void apply_jump(const ScatteringProblem& problem, double z, State& s) {
  const double k1 = std::sqrt(local_F(problem, z * (1 - 1e-12)));
  const double k2 = std::sqrt(local_F(problem, z * (1 + 1e-12)));
  const double h = 0.5 * std::log(k2 / k1);
  const double ch = std::cosh(h), sh = std::sinh(h);
  const std::complex<double> bp(s[0], s[1]), bm(s[2], s[3]);
  const std::complex<double> e = std::polar(1.0, 2.0 * s[4]);
  const std::complex<double> np = ch * bp + sh * bm / e;
  const std::complex<double> nm = sh * e * bp + ch * bm;
  s[0] = np.real();
  s[1] = np.imag();
  s[2] = nm.real();
  s[3] = nm.imag();
}

}  // namespace

ReflectionResult integrate_amplitudes_fixed(const ScatteringProblem& problem) {
  namespace ode = boost::numeric::odeint;
  const Window w = problem.window();
  const auto& tol = problem.tolerances();
  const auto jumps = problem.potential().discontinuities();

  std::vector<double> pts{w.z_min};
  for (double d : problem.potential().breakpoints())
    if (d > w.z_min && d < w.z_max) pts.push_back(d);
  pts.push_back(w.z_max);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // The phase state is kept in [0, 2pi); whole turns are counted separately
  // so the step control acts on a small number.
  // Purely incoming wave at z_min. The non-adiabatic part of b+ that follows
  // b- without a free constant is i F'/(8 F k); starting from it instead of
  // zero removes an O(sqrt Q) boundary transient.
  const FJet f0 = problem.f_jet(w.z_min);
  if (!(f0.f > 0)) throw DomainError("integrate_amplitudes: classical turning point (F <= 0)");
  const double b0 = f0.d1 / (8.0 * f0.f * std::sqrt(f0.f));
  State s{0.0, b0, 1.0, 0.0, 0.0};
  long turns = 0;
  const double two_pi = 2.0 * units::pi;
  AmplitudeRhs rhs{&problem};
  ode::bulirsch_stoer<State> stepper(tol.ode_abs, tol.ode_rel);
  long steps = 0;
  double dx = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (i > 0 && std::binary_search(jumps.begin(), jumps.end(), pts[i])) apply_jump(problem, pts[i], s);
    double x = std::log(pts[i]);
    const double x1 = std::log(pts[i + 1]);
    rhs.lo = pts[i] * (1 + 1e-15);
    rhs.hi = pts[i + 1] * (1 - 1e-15);
    if (dx == 0) dx = (x1 - x) * 1e-4;
    while (x < x1) {
      if (x + dx > x1) dx = x1 - x;
      if (stepper.try_step(rhs, s, x, dx) == ode::success) {
        const double m = std::floor(s[4] / two_pi);
        s[4] -= m * two_pi;
        turns += static_cast<long>(m);
      }
      if (++steps > 20000000 || !(dx > 1e-14))
        throw NumericalError("integrate_amplitudes: step control failed", dx);
    }
  }

  // phi(z_max) - phi_hat(z_max), with the turn count removed exactly.
  double gauge = wkb_phase(problem, w.z_max) - two_pi * static_cast<double>(turns);
  gauge = std::fmod(gauge, two_pi) - s[4];
  const std::complex<double> bp(s[0], s[1]), bm(s[2], s[3]);
  ReflectionResult res;
  res.window = w;
  res.r = bp / bm * std::polar(1.0, -2.0 * gauge);
  const double nm = std::norm(bm);
  res.probability = std::norm(bp) / nm;
  // Flux through z_min relative to the incident flux.
  const double inward = 1.0 - b0 * b0;
  res.transmitted_flux_fraction = inward / nm;
  res.flux_deficit = (nm - std::norm(bp) - inward) / nm;
  return res;
}

ReflectionResult integrate_amplitudes(const ScatteringProblem& problem) {
  const auto& tol = problem.tolerances();
  ReflectionResult res = integrate_amplitudes_fixed(problem);
  std::vector<double> deltas;
  Window w = problem.window();
  for (int i = 0; i < tol.max_extensions; ++i) {
    w = {0.5 * w.z_min, 2.0 * w.z_max};
    ReflectionResult next = integrate_amplitudes_fixed(problem.with_window(w));
    const double d = std::abs(next.r - res.r);
    deltas.push_back(d);
    res = std::move(next);
    if (d < tol.window) {
      res.window_convergence = std::move(deltas);
      return res;
    }
  }
  throw NumericalError("integrate_amplitudes: window extension did not converge", deltas.back());
}

std::vector<CurvePoint> reflection_curve(const PotentialPtr& potential, const std::vector<double>& heights_m,
                                         ScatteringTolerances tol, unsigned threads) {
  if (heights_m.empty()) throw DomainError("reflection_curve: empty height list");
  for (double h : heights_m)
    if (!(h > 0)) throw DomainError("reflection_curve: heights must be > 0");
  std::vector<CurvePoint> out(heights_m.size());
  parallel_for(heights_m.size(), [&](std::size_t i) {
    const auto problem = ScatteringProblem::at_height(potential, heights_m[i], tol);
    out[i] = {heights_m[i], problem.energy(), integrate_amplitudes(problem)};
  }, threads);
  return out;
}

void write_reflection_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  std::ostringstream s;
  s.precision(12);
  s << "h_m,E_neV,re_r,im_r,prob_reflect,flux_deficit\n";
  for (const auto& p : curve)
    s << p.height_m << "," << p.energy_neV << "," << p.result.r.real() << "," << p.result.r.imag() << ","
      << p.result.probability << "," << p.result.flux_deficit << "\n";
  out << s.str();
}

std::vector<std::complex<double>> track_log_branch(const std::vector<std::complex<double>>& values,
                                                   const std::vector<double>& k) {
  if (values.size() != k.size()) throw DomainError("track_log_branch: size mismatch");
  std::vector<std::complex<double>> out;
  out.reserve(values.size());
  const double two_pi = 2.0 * units::pi;
  for (std::size_t j = 0; j < values.size(); ++j) {
    std::complex<double> l = std::log(values[j]);
    if (j > 0) {
      const std::complex<double> predicted = out[j - 1] * (k[j] / k[j - 1]);
      l += std::complex<double>(0.0, two_pi * std::round((predicted.imag() - l.imag()) / two_pi));
    }
    out.push_back(l);
  }
  return out;
}

std::complex<double> extrapolate_to_zero(const std::vector<double>& x, const std::vector<std::complex<double>>& y) {
  if (x.empty() || x.size() != y.size()) throw DomainError("extrapolate_to_zero: bad samples");
  std::vector<std::complex<double>> p(y);
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = ((0.0 - x[i + m]) * p[i] + (x[i] - 0.0) * p[i + 1]) / (x[i] - x[i + m]);
  return p[0];
}

ScatteringLength scattering_length(const PotentialPtr& potential, const ScatteringLengthOptions& opt) {
  if (opt.heights_m.size() < 3) throw DomainError("scattering_length: need at least three heights");
  std::vector<double> heights = opt.heights_m;
  std::sort(heights.begin(), heights.end(), std::greater<>());
  const auto curve = reflection_curve(potential, heights, opt.tol, opt.threads);

  ScatteringLength out;
  std::vector<std::complex<double>> minus_r;
  std::vector<double> k;
  for (const auto& p : curve) {
    ScatteringLengthSample s;
    s.height_m = p.height_m;
    s.r = p.result.r;
    s.wavenumber = ScatteringProblem(potential, p.energy_neV, opt.tol, p.result.window).wavenumber();
    minus_r.push_back(-s.r);
    k.push_back(s.wavenumber);
    out.samples.push_back(s);
  }
  const auto logs = track_log_branch(minus_r, k);
  std::vector<std::complex<double>> a;
  for (std::size_t j = 0; j < logs.size(); ++j) {
    out.samples[j].log_minus_r = logs[j];
    out.samples[j].a = std::complex<double>(0.0, 1.0) * logs[j] / (2.0 * k[j]);
    a.push_back(out.samples[j].a);
  }
  // Lowest-k points carry the limit; compare extrapolation orders.
  const std::size_t n = a.size();
  const std::vector<double> k3(k.end() - 3, k.end()), k2(k.end() - 2, k.end());
  const std::vector<std::complex<double>> a3(a.begin() + static_cast<long>(n) - 3, a.end());
  const std::vector<std::complex<double>> a2(a.begin() + static_cast<long>(n) - 2, a.end());
  out.a = extrapolate_to_zero(k3, a3);
  const auto lower = extrapolate_to_zero(k2, a2);
  out.residual = std::abs(out.a - lower) / std::abs(out.a);
  if (!(out.residual <= opt.residual_tol))
    throw NumericalError("scattering_length: extrapolation residual above tolerance", out.residual);
  if (!(out.a.imag() < 0)) throw NumericalError("scattering_length: Im(a) is not negative", out.a.imag());
  return out;
}

}  // namespace badlands
