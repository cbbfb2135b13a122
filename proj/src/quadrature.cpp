#include "badlands/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace badlands::quad {

namespace {

// Newton iteration on L_n with the classical asymptotic starting guesses.
Rule build_laguerre(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  long double z = 0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * n);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * n);
    } else {
      long double ai = i - 1;
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - rule.nodes[i - 2]);
    }
    long double p1 = 0, p2 = 0, pp = 0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        long double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
      }
      pp = (n * p1 - n * p2) / z;
      long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-17L * std::fabs(z)) break;
    }
    rule.nodes[i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(-1.0L / (pp * n * p2));
  }
  return rule;
}

}  // namespace

const Rule& gauss_laguerre(int n) {
  if (n < 1 || n > 180) throw std::invalid_argument("gauss_laguerre: unsupported order");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_laguerre(n)).first;
  return it->second;
}

}  // namespace badlands::quad
