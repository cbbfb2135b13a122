#include "badlands/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "badlands/errors.hpp"

namespace badlands {

PowerLawPotential::PowerLawPotential(double coefficient, double exponent)
    : coefficient_(coefficient), exponent_(exponent) {
  if (!(exponent > 0)) throw DomainError("PowerLawPotential: exponent must be > 0");
}

PotentialJet PowerLawPotential::jet(double z) const {
  if (!(z > 0)) throw DomainError("PowerLawPotential: z must be > 0");
  const double n = exponent_;
  const double v = -coefficient_ * std::pow(z, -n);
  return {v, -n * v / z, n * (n + 1) * v / (z * z)};
}

std::string PowerLawPotential::describe() const {
  std::ostringstream s;
  s << "-" << coefficient_ << "/z^" << exponent_;
  return s.str();
}

PiecewiseConstantPotential::PiecewiseConstantPotential(std::vector<double> edges, std::vector<double> values)
    : edges_(std::move(edges)), values_(std::move(values)) {
  if (values_.size() != edges_.size() + 1)
    throw DomainError("PiecewiseConstantPotential: need one more value than edges");
  if (!std::is_sorted(edges_.begin(), edges_.end()) ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw DomainError("PiecewiseConstantPotential: edges must be strictly increasing");
}

PotentialJet PiecewiseConstantPotential::jet(double z) const {
  const auto i = std::upper_bound(edges_.begin(), edges_.end(), z) - edges_.begin();
  return {values_[static_cast<std::size_t>(i)], 0, 0};
}

std::string PiecewiseConstantPotential::describe() const {
  std::ostringstream s;
  s << "piecewise-constant(" << edges_.size() << " steps)";
  return s.str();
}

}  // namespace badlands
