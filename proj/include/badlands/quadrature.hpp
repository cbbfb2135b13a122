#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <vector>

namespace badlands::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
/// Rules are computed once per n and cached; safe to call concurrently.
const Rule& gauss_laguerre(int n);

struct Estimate {
  double value = 0;
  double error = 0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b] (b may be +inf).
template <class F>
Estimate kronrod(F&& f, double a, double b, double rel_tol, unsigned max_depth = 24) {
  Estimate e;
  double l1 = 0;
  e.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, max_depth, rel_tol, &e.error, &l1);
  return e;
}

/// Fixed Gauss-Laguerre sum of g over the rule: sum_i w_i g(x_i).
template <class G>
double laguerre_sum(const Rule& rule, G&& g) {
  double s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return s;
}

}  // namespace badlands::quad
