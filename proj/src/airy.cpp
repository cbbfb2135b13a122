#include "badlands/airy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "badlands/errors.hpp"

namespace badlands {

namespace {

constexpr long double kC1 = 0.355028053887817239260063186004183176L;  // Ai(0)
constexpr long double kC2 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

double series(double xd) {
  const long double x = xd, x3 = x * x * x;
  long double f = 1, g = x, tf = 1, tg = x;
  for (int k = 0; k < 200; ++k) {
    tf *= x3 / ((3.0L * k + 2) * (3.0L * k + 3));
    tg *= x3 / ((3.0L * k + 3) * (3.0L * k + 4));
    f += tf;
    g += tg;
    if (std::abs(tf) < 1e-22L * std::abs(f) && std::abs(tg) < 1e-22L * std::abs(g)) break;
  }
  return static_cast<double>(kC1 * f - kC2 * g);
}

// u_k coefficients of the large-argument expansions, summed to the
// smallest term.
std::pair<double, double> asymptotic_sums(double zeta, bool alternate_pairs) {
  double p = 1, q = 0, u = 1, last = 1;
  for (int k = 1; k < 60; ++k) {
    u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    const double term = u / std::pow(zeta, k);
    if (term > last) break;
    last = term;
    if (alternate_pairs) {
      // P = sum (-1)^j u_{2j}/zeta^{2j}, Q = sum (-1)^j u_{2j+1}/zeta^{2j+1}
      const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      if (k % 2 == 0) p += sign * term; else q += sign * term;
    } else {
      p += (k % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (term < 1e-17) break;
  }
  return {p, q};
}

}  // namespace

double airy_ai(double x) {
  if (std::isnan(x)) throw DomainError("airy_ai: NaN argument");
  if (x >= -8.0 && x <= 6.5) return series(x);
  const double pi = std::numbers::pi;
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const auto s = asymptotic_sums(zeta, false);
    return std::exp(-zeta) / (2.0 * std::sqrt(pi) * std::pow(x, 0.25)) * s.first;
  }
  const double t = -x;
  const double zeta = 2.0 / 3.0 * t * std::sqrt(t);
  const auto s = asymptotic_sums(zeta, true);
  const double phase = zeta + pi / 4;
  return (std::sin(phase) * s.first - std::cos(phase) * s.second) / (std::sqrt(pi) * std::pow(t, 0.25));
}

double airy_zero(int n) {
  if (n < 1) throw DomainError("airy_zero: n must be >= 1");
  const double t = 3.0 * std::numbers::pi * (4.0 * n - 1) / 8.0;
  const double t2 = 1.0 / (t * t);
  const double guess = -std::pow(t, 2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2);
  const double half_gap = 0.4 * std::numbers::pi / std::sqrt(-guess);
  double lo = guess - half_gap, hi = guess + half_gap;
  if (airy_ai(lo) * airy_ai(hi) > 0) throw NumericalError("airy_zero: bracket lost the root", n);
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(
      [](double x) { return airy_ai(x); }, lo, hi,
      boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3), iterations);
  if (iterations >= 200) throw NumericalError("airy_zero: root refinement did not converge", root.second - root.first);
  return 0.5 * (root.first + root.second);
}

}  // namespace badlands
