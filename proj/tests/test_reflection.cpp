#include <boost/numeric/odeint.hpp>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "badlands/casimir_polder.hpp"
#include "badlands/errors.hpp"
#include "badlands/reflection.hpp"
#include "badlands/units.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace badlands;
using badlands::testing::catalog;
using badlands::testing::table_for;
using cplx = std::complex<double>;

namespace {

const double kScale = 2.0 * units::hydrogen_mc2 / (units::hbar_c * units::hbar_c);

// Transfer-matrix reflection amplitude for a piecewise-constant potential:
// psi = A_j e^{i k_j z} + B_j e^{-i k_j z} in region j, A_0 = 0, B_0 = 1,
// r = A_N / B_N.
cplx square_well_r(const std::vector<double>& edges, const std::vector<double>& values, double energy) {
  const cplx i(0, 1);
  cplx a = 0, b = 1;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const double z = edges[j];
    const double k0 = std::sqrt(kScale * (energy - values[j]));
    const double k1 = std::sqrt(kScale * (energy - values[j + 1]));
    const cplx psi = a * std::exp(i * k0 * z) + b * std::exp(-i * k0 * z);
    const cplx dpsi = i * k0 * (a * std::exp(i * k0 * z) - b * std::exp(-i * k0 * z));
    a = 0.5 * (psi + dpsi / (i * k1)) * std::exp(-i * k1 * z);
    b = 0.5 * (psi - dpsi / (i * k1)) * std::exp(i * k1 * z);
  }
  return a / b;
}

// Zero-energy scattering length of a tabulated potential by direct
// integration of psi'' = -s |V| psi from an incoming WKB wave deep in the
// potential up to the table end, then exact matching onto the z^-4 tail,
// whose solutions are z e^{+-i l / z}.
cplx zero_energy_scattering_length(const PotentialTable& t, double z_start) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;  // re psi, im psi, re psi', im psi'
  auto rhs = [&](const State& s, State& d, double x) {
    const double z = std::exp(x);
    const double f = -kScale * t(z);
    d[0] = z * s[2];
    d[1] = z * s[3];
    d[2] = -z * f * s[0];
    d[3] = -z * f * s[1];
  };
  const auto j = t.jet(z_start);
  const double f = -kScale * j.v, f1 = -kScale * j.d1;
  const cplx psi = std::pow(f, -0.25);
  const cplx dpsi = (-f1 / (4 * f) - cplx(0, 1) * std::sqrt(f)) * psi;
  State s{psi.real(), psi.imag(), dpsi.real(), dpsi.imag()};
  const double z_end = t.z_high();
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs, s,
                          std::log(z_start), std::log(z_end), 1e-4);
  const cplx p(s[0], s[1]), dp(s[2], s[3]);
  const double ell = std::sqrt(-kScale * t.values().back()) * z_end * z_end;
  const cplx e = std::exp(cplx(0, ell / z_end));
  // p = al z e + be z / e ; dp = al e (1 - i l/z) + be (1 + i l/z) / e
  const cplx u1 = z_end * e, u2 = z_end / e;
  const cplx du1 = e * cplx(1, -ell / z_end), du2 = cplx(1, ell / z_end) / e;
  const cplx det = u1 * du2 - u2 * du1;
  const cplx al = (p * du2 - u2 * dp) / det;
  const cplx be = (u1 * dp - p * du1) / det;
  return cplx(0, -ell) * (al - be) / (al + be);
}

}  // namespace

TEST_SUITE("reflection") {
  TEST_CASE("mass and gravity conversions") {
    CHECK(weight_neV_per_m() == doctest::Approx(102.5).epsilon(0.005));
    CHECK(energy_of_height(0.1) == doctest::Approx(0.1 * weight_neV_per_m()).epsilon(1e-15));
    CHECK_THROWS_AS(energy_of_height(-1.0), DomainError);
  }

  TEST_CASE("zero potential does not reflect") {
    auto v = std::make_shared<ZeroPotential>();
    ScatteringProblem p(v, 5.0, {}, Window{1.0, 100.0});
    const auto r = integrate_amplitudes_fixed(p);
    CHECK(std::abs(r.r) < 1e-14);
    CHECK(r.transmitted_flux_fraction == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("local wavenumber squared") {
    auto v = std::make_shared<PowerLawPotential>(1e6, 3.0);
    ScatteringProblem p(v, 2.0, {}, Window{1.0, 1e4});
    CHECK(local_F(p, 10.0) == doctest::Approx(kScale * (2.0 + 1e3)).epsilon(1e-12));
    CHECK(p.wavenumber() == doctest::Approx(std::sqrt(kScale * 2.0)).epsilon(1e-14));
    const auto j = p.f_jet(10.0);
    CHECK(j.d1 == doctest::Approx(-3 * kScale * 1e6 / 1e4).epsilon(1e-12));
    CHECK(j.d2 == doctest::Approx(12 * kScale * 1e6 / 1e5).epsilon(1e-12));
    auto step = std::make_shared<PiecewiseConstantPotential>(std::vector<double>{5.0}, std::vector<double>{5.0, 0.0});
    ScatteringProblem q(step, 2.0, {}, Window{1.0, 10.0});
    CHECK_THROWS_AS(local_F(q, 2.0), DomainError);
  }

  TEST_CASE("WKB phase: exact for free motion, additive, and matching kz at infinity") {
    auto zero = std::make_shared<ZeroPotential>();
    ScatteringProblem free(zero, 3.0, {}, Window{1.0, 10.0});
    const double k = free.wavenumber();
    CHECK(wkb_phase(free, 17.0) == doctest::Approx(17.0 * k).epsilon(1e-14));

    auto t = table_for("silica");
    const auto p = ScatteringProblem::at_height(t, 0.1);
    const double a = 3.0, b = 80.0, c = 2000.0;
    CHECK(wkb_phase_difference(p, a, c) ==
          doctest::Approx(wkb_phase_difference(p, a, b) + wkb_phase_difference(p, b, c)).epsilon(1e-10));
    CHECK(wkb_phase(p, c) - wkb_phase(p, a) == doctest::Approx(wkb_phase_difference(p, a, c)).epsilon(1e-10));
    const double zf = 1e7;
    CHECK(std::abs(wkb_phase(p, zf) - p.wavenumber() * zf) < 1e-8);
    // Direct quadrature of sqrt F.
    double direct = 0;
    const int n = 200000;
    const double h = std::log(c / a) / n;
    for (int i = 0; i < n; ++i) {
      const double z = a * std::exp((i + 0.5) * h);
      direct += std::sqrt(local_F(p, z)) * z * h;
    }
    CHECK(wkb_phase_difference(p, a, c) == doctest::Approx(direct).epsilon(1e-8));
  }

  TEST_CASE("default window satisfies its edge criteria") {
    for (double h : {1e-7, 0.1, 100.0}) {
      const auto p = ScatteringProblem::at_height(table_for("silicon"), h);
      const auto w = p.window();
      CHECK(std::abs(p.badlands(w.z_min)) < p.tolerances().badlands_edge);
      CHECK(std::abs(p.potential()(w.z_max)) / p.energy() < p.tolerances().potential_edge);
    }
  }

  TEST_CASE("randomized square wells match the transfer-matrix amplitude") {
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> nedges(1, 5);
    std::uniform_real_distribution<double> edge(5.0, 1500.0), depth(-60.0, 0.9), hgt(0.01, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const double energy = energy_of_height(hgt(rng));
      std::vector<double> edges(static_cast<std::size_t>(nedges(rng)));
      for (auto& e : edges) e = edge(rng);
      std::sort(edges.begin(), edges.end());
      if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
      std::vector<double> values;
      for (std::size_t j = 0; j < edges.size(); ++j) values.push_back(depth(rng) * energy);
      values.push_back(0.0);
      auto v = std::make_shared<PiecewiseConstantPotential>(edges, values);
      ScatteringProblem p(v, energy, {}, Window{0.5 * edges.front(), 2.0 * edges.back()});
      const auto res = integrate_amplitudes_fixed(p);
      const cplx oracle = square_well_r(edges, values, energy);
      worst = std::max(worst, std::abs(res.r - oracle));
      CHECK(std::abs(res.r - oracle) < 1e-9);
      CHECK(std::abs(res.flux_deficit) < 1e-10);
    }
    MESSAGE("worst square-well |r - r_oracle| = " << worst);
  }

  TEST_CASE("reflection is unitary with the transmitted flux on every solve") {
    for (const char* name : {"perfect", "silicon", "silica", "aerogel98"}) {
      const auto curve = reflection_curve(table_for(name), {1e-7, 1e-4, 1e-2, 0.1, 1.0, 100.0});
      for (const auto& pt : curve) {
        CHECK(pt.result.probability + pt.result.transmitted_flux_fraction == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(pt.result.flux_deficit) < 1e-8);
        CHECK(pt.result.probability == doctest::Approx(std::norm(pt.result.r)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("reflection probability decreases monotonically with drop height") {
    std::vector<double> h;
    for (double x = 1e-8; x < 1e3; x *= 3.0) h.push_back(x);
    for (const char* name : {"perfect", "silica"}) {
      const auto curve = reflection_curve(table_for(name), h);
      for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].result.probability < curve[i - 1].result.probability);
    }
  }

  TEST_CASE("halving the tolerances changes r by less than the tolerance") {
    const auto t = table_for("silica");
    for (double h : {1e-6, 0.1, 10.0}) {
      const auto p = ScatteringProblem::at_height(t, h);
      auto tight = p.tolerances();
      tight.ode_rel /= 2;
      tight.ode_abs /= 2;
      tight.window /= 2;
      const auto a = integrate_amplitudes(p);
      const auto b = integrate_amplitudes(ScatteringProblem::at_height(t, h, tight));
      CHECK(std::abs(a.r - b.r) < p.tolerances().window);
    }
  }

  TEST_CASE("halving the ODE tolerance on a fixed window moves |r|^2 by less than ten tolerances") {
    for (const char* name : {"perfect", "silica"})
      for (double h : {1e-6, 0.1, 10.0}) {
        const auto p = ScatteringProblem::at_height(table_for(name), h);
        auto half = p.tolerances();
        half.ode_rel /= 2;
        half.ode_abs /= 2;
        const double a = integrate_amplitudes_fixed(p).probability;
        const double b = integrate_amplitudes_fixed(p.with_tolerances(half)).probability;
        CAPTURE(name);
        CAPTURE(h);
        CHECK(std::abs(a - b) < 10 * p.tolerances().ode_rel);
      }
  }

  TEST_CASE("r does not depend on the integration window once converged") {
    const auto t = table_for("silicon");
    const auto p = ScatteringProblem::at_height(t, 0.1);
    const auto w = p.window();
    const auto a = integrate_amplitudes_fixed(p.with_window({w.z_min * 0.25, w.z_max * 4}));
    const auto b = integrate_amplitudes_fixed(p.with_window({w.z_min * 0.0625, w.z_max * 16}));
    CHECK(std::abs(a.r - b.r) < 1e-8);
    const auto conv = integrate_amplitudes(p);
    REQUIRE(!conv.window_convergence.empty());
    CHECK(conv.window_convergence.back() < p.tolerances().window);
  }

  TEST_CASE("curve CSV has the documented columns") {
    const auto curve = reflection_curve(table_for("perfect"), {0.1});
    std::ostringstream out;
    write_reflection_csv(out, curve);
    const std::string s = out.str();
    CHECK(s.rfind("h_m,E_neV,re_r,im_r,prob_reflect,flux_deficit\n", 0) == 0);
  }

  TEST_CASE("log branch tracking follows the linear-in-k continuation") {
    const std::vector<double> k{0.4, 0.6, 0.8, 1.0, 1.3};
    const cplx slope(-0.05, 7.5);
    std::vector<cplx> values, expect;
    for (double x : k) {
      expect.push_back(slope * x);
      values.push_back(std::exp(slope * x));
    }
    const auto logs = track_log_branch(values, k);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(logs[i] - expect[i]) < 1e-12);
  }

  TEST_CASE("Neville extrapolation is exact for polynomials") {
    const std::vector<double> x{0.3, 0.2, 0.1};
    std::vector<cplx> y;
    for (double v : x) y.push_back(cplx(1, -2) + cplx(0.5, 0.1) * v + cplx(-3, 4) * v * v);
    CHECK(std::abs(extrapolate_to_zero(x, y) - cplx(1, -2)) < 1e-13);
  }

  TEST_CASE("pure z^-4 potential has the purely imaginary scattering length -i l") {
    const double c4 = ideal_reference(catalog().atom).c4_star;
    const double ell = cp_length(c4, units::hydrogen_mc2);
    const auto sl = scattering_length(std::make_shared<PowerLawPotential>(c4, 4.0));
    CHECK(std::abs(sl.a.real()) < 0.01 * std::abs(sl.a.imag()));
    CHECK(sl.a.imag() == doctest::Approx(-ell).epsilon(1e-3));
    CHECK(sl.residual < 1e-3);
  }

  TEST_CASE("tabulated potential scattering length matches zero-energy integration") {
    for (const char* name : {"perfect", "silica"}) {
      const auto t = table_for(name);
      const auto sl = scattering_length(t);
      const cplx oracle = zero_energy_scattering_length(*t, 1e-5);
      CAPTURE(name);
      CAPTURE(sl.a);
      CAPTURE(oracle);
      CHECK(std::abs(sl.a - oracle) < 2e-4 * std::abs(oracle));
    }
  }
}
