// One line per acceptance criterion; exit status is nonzero if any fails.
#include <boost/math/special_functions/airy.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "badlands/airy.hpp"
#include "badlands/casimir_polder.hpp"
#include "badlands/gravity.hpp"
#include "badlands/liouville.hpp"
#include "badlands/material_config.hpp"
#include "badlands/parallel.hpp"
#include "badlands/reflection.hpp"
#include "badlands/units.hpp"

using namespace badlands;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const MaterialCatalog& cat() {
  static const MaterialCatalog c = load_catalog(locate_catalog());
  return c;
}

const std::vector<std::string> kSurfaces{"perfect", "silicon", "silica", "aerogel50", "aerogel90", "aerogel98"};
const std::vector<std::string> kBulk{"perfect", "silicon", "silica"};

std::map<std::string, std::shared_ptr<const PotentialTable>>& tables() {
  static std::map<std::string, std::shared_ptr<const PotentialTable>> t;
  return t;
}

std::shared_ptr<const PotentialTable> table(const std::string& name) {
  auto& t = tables();
  auto it = t.find(name);
  if (it == t.end())
    it = t.emplace(name, std::make_shared<PotentialTable>(build_potential_table(cat().find(name), cat().atom))).first;
  return it->second;
}

Outcome ac1() {
  const GravityConfig g;
  const double mg = weight_neV_per_m();
  const double ell = g.length() / 1e3;
  const bool ok = std::abs(mg / 102.5 - 1) < 0.005 && std::abs(ell / 5.87 - 1) < 0.01;
  return {ok, fmt("mg = %.3f neV/m, l_grav = %.4f um", mg, ell)};
}

Outcome ac2() {
  const double c4 = ideal_reference(cat().atom).c4_star;
  const double l = cp_length(c4, units::hydrogen_mc2);
  const bool ok = std::abs(c4 / 1.57e7 - 1) < 0.02 && l >= 27 && l <= 30;
  return {ok, fmt("C4* = %.5e neV nm^4, l_CP = %.3f nm", c4, l)};
}

Outcome ac3() {
  const auto t = table("perfect");
  const double lo = -t->log_slope(t->z_low()), hi = -t->log_slope(t->z_high());
  const auto& z = t->z_grid();
  const auto& v = t->values();
  const std::size_t n = z.size();
  const double lo_raw = -std::log(v[1] / v[0]) / std::log(z[1] / z[0]);
  const double hi_raw = -std::log(v[n - 1] / v[n - 2]) / std::log(z[n - 1] / z[n - 2]);
  const bool ok = std::abs(lo_raw - 3) <= 0.05 && std::abs(hi_raw - 4) <= 0.05 && std::abs(lo - 3) <= 0.05 &&
                  std::abs(hi - 4) <= 0.05;
  return {ok, fmt("slope %.4f at z = %g nm, %.4f at z = %g nm", lo_raw, z.front(), hi_raw, z.back())};
}

Outcome ac4() {
  const double expect[] = {0.14, 0.19, 0.33};
  std::string d;
  bool ok = true;
  for (std::size_t i = 0; i < kBulk.size(); ++i) {
    const auto r = integrate_amplitudes(ScatteringProblem::at_height(table(kBulk[i]), 0.10));
    ok = ok && std::abs(r.probability - expect[i]) <= 0.03;
    d += fmt("%s %.4f (%.2f) ", kBulk[i].c_str(), r.probability, expect[i]);
  }
  return {ok, d};
}

Outcome ac5() {
  bool ok = true;
  double lowest_quantum = 1, highest_classical = 0;
  const std::vector<double> quantum{1e-9, 1e-8, 1e-7}, classical{100.0, 300.0, 1000.0};
  for (const auto& m : kBulk) {
    for (const auto& p : reflection_curve(table(m), quantum)) lowest_quantum = std::min(lowest_quantum, p.result.probability);
    for (const auto& p : reflection_curve(table(m), classical))
      highest_classical = std::max(highest_classical, p.result.probability);
  }
  ok = lowest_quantum > 0.99 && highest_classical < 0.01;
  return {ok, fmt("min |r|^2 (h <= 1e-7 m) = %.5f, max |r|^2 (h >= 100 m) = %.2e", lowest_quantum,
                  highest_classical)};
}

Outcome ac6() {
  const std::vector<double> heights{1e-7, 1e-5, 1e-3, 0.1, 10.0};
  std::vector<std::pair<std::string, double>> jobs;
  for (const auto& m : kBulk)
    for (double h : heights) jobs.emplace_back(m, h);
  for (const auto& m : kBulk) table(m);
  std::vector<double> diff(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto p = ScatteringProblem::at_height(tables().at(jobs[i].first), jobs[i].second);
    const auto direct = integrate_amplitudes(p);
    const auto transformed = scatter_transformed(liouville_transform(p));
    diff[i] = std::abs(direct.r - transformed.r);
  });
  const double worst = *std::max_element(diff.begin(), diff.end());
  return {worst < 1e-6, fmt("max |r~ - r| = %.2e over %zu cases", worst, jobs.size())};
}

Outcome ac7() {
  bool ok = true;
  std::string d;
  // Ends of the transformed domain.
  double worst_end = 0;
  for (const auto& m : kBulk)
    for (double h : {1e-5, 0.1}) {
      const auto lp = liouville_transform(ScatteringProblem::at_height(table(m), h));
      worst_end = std::max({worst_end, std::abs(lp.samples.front().barrier), std::abs(lp.samples.back().barrier)});
    }
  ok = ok && worst_end < 1e-10;
  // Peak height against energy on silica.
  double last = 0;
  bool monotone = true;
  for (double h : {10.0, 0.1, 0.01, 0.001, 1e-5}) {
    const double q = liouville_transform(ScatteringProblem::at_height(table("silica"), h)).peak.barrier;
    monotone = monotone && q > last;
    last = q;
  }
  ok = ok && monotone;
  // Material order at E = mg x 10 cm.
  std::vector<double> peak;
  for (const auto& m : kBulk) peak.push_back(liouville_transform(ScatteringProblem::at_height(table(m), 0.1)).peak.barrier);
  const bool ordered = peak[2] > peak[1] && peak[1] > peak[0];
  ok = ok && ordered;
  d = fmt("end |Q| <= %.1e, peak monotone in E: %s, peak Q at 10 cm silica %.4f > silicon %.4f > perfect %.4f",
          worst_end, monotone ? "yes" : "no", peak[2], peak[1], peak[0]);
  return {ok, d};
}

Outcome ac8() {
  std::vector<double> heights;
  for (double h = 1e-8; h <= 1e3; h *= 10) heights.push_back(h);
  double worst = 0;
  for (const auto& m : kSurfaces)
    for (const auto& p : reflection_curve(table(m), heights))
      worst = std::max(worst, std::abs(1.0 - p.result.probability - p.result.transmitted_flux_fraction));
  return {worst < 1e-8, fmt("max |1 - |r|^2 - T| = %.2e over %zu solves", worst, heights.size() * kSurfaces.size())};
}

Outcome ac9() {
  const double s = 2.0 * units::hydrogen_mc2 / (units::hbar_c * units::hbar_c);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> nedges(1, 5);
  std::uniform_real_distribution<double> edge(5.0, 1500.0), depth(-60.0, 0.9), hgt(0.01, 1.0);
  double worst = 0;
  int count = 0;
  while (count < 100) {
    const double e = energy_of_height(hgt(rng));
    std::vector<double> edges(static_cast<std::size_t>(nedges(rng)));
    for (auto& x : edges) x = edge(rng);
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    std::vector<double> values;
    for (std::size_t j = 0; j < edges.size(); ++j) values.push_back(depth(rng) * e);
    values.push_back(0.0);
    // Closed-form transfer matrix, A_0 = 0, B_0 = 1, r = A_N / B_N.
    const cplx i(0, 1);
    cplx a = 0, b = 1;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      const double z = edges[j];
      const double k0 = std::sqrt(s * (e - values[j])), k1 = std::sqrt(s * (e - values[j + 1]));
      const cplx psi = a * std::exp(i * k0 * z) + b * std::exp(-i * k0 * z);
      const cplx dpsi = i * k0 * (a * std::exp(i * k0 * z) - b * std::exp(-i * k0 * z));
      a = 0.5 * (psi + dpsi / (i * k1)) * std::exp(-i * k1 * z);
      b = 0.5 * (psi - dpsi / (i * k1)) * std::exp(i * k1 * z);
    }
    auto v = std::make_shared<PiecewiseConstantPotential>(edges, values);
    const auto res = integrate_amplitudes_fixed(
        ScatteringProblem(v, e, {}, Window{0.5 * edges.front(), 2.0 * edges.back()}));
    worst = std::max(worst, std::abs(res.r - a / b));
    ++count;
  }
  return {worst < 1e-9, fmt("max |r - r_exact| = %.2e over %d wells", worst, count)};
}

Outcome ac10() {
  const double c4 = ideal_reference(cat().atom).c4_star;
  const double l = cp_length(c4, units::hydrogen_mc2);
  const auto sl = scattering_length(std::make_shared<PowerLawPotential>(c4, 4.0));
  const bool ok = std::abs(sl.a.real()) < 0.01 * std::abs(sl.a.imag()) && std::abs(std::abs(sl.a.imag()) / l - 1) < 0.01;
  return {ok, fmt("a = %.6f %+.6fi nm, l_CP = %.6f nm", sl.a.real(), sl.a.imag(), l)};
}

Outcome ac11() {
  const double reference[] = {0.11, 0.14, 0.22, 0.32, 1.07, 4.64};
  const GravityConfig g;
  std::vector<double> tau;
  std::string d;
  bool ok = true;
  for (std::size_t i = 0; i < kSurfaces.size(); ++i) {
    const auto sl = scattering_length(table(kSurfaces[i]));
    tau.push_back(gbs_lifetime(sl.a, g));
    ok = ok && std::abs(tau.back() / reference[i] - 1) <= 0.20;
    d += fmt("%s %.3f (%.2f) ", kSurfaces[i].c_str(), tau.back(), reference[i]);
  }
  for (std::size_t i = 1; i < tau.size(); ++i) ok = ok && tau[i] > tau[i - 1];
  return {ok, d};
}

Outcome ac12() {
  double worst_zero = 0, worst_ai = 0;
  const GravityConfig g;
  for (int n = 1; n <= 5; ++n) {
    worst_zero = std::max(worst_zero, std::abs(airy_zero(n) - boost::math::airy_ai_zero<double>(n)));
    const double x = -gbs_energy(g, n) / (g.weight() * g.length() * units::peV_per_neV);
    worst_ai = std::max(worst_ai, std::abs(boost::math::airy_ai(x)));
  }
  return {worst_zero < 1e-9 && worst_ai < 1e-9,
          fmt("max zero error %.1e, max |Ai(-E_n / m g l)| = %.1e", worst_zero, worst_ai)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 constants", ac1},         {"AC2 C4* and l_CP", ac2},       {"AC3 power laws", ac3},
      {"AC4 |r|^2 at 10 cm", ac4},    {"AC5 limits", ac5},             {"AC6 Liouville invariance", ac6},
      {"AC7 badlands structure", ac7}, {"AC8 unitarity", ac8},         {"AC9 square wells", ac9},
      {"AC10 z^-4 scattering length", ac10}, {"AC11 lifetimes", ac11}, {"AC12 Airy zeros", ac12}};
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), dt);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
