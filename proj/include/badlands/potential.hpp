#pragma once

#include <memory>
#include <string>
#include <vector>

namespace badlands {

/// V and its first two z-derivatives (neV, neV/nm, neV/nm^2).
struct PotentialJet {
  double v = 0;
  double d1 = 0;
  double d2 = 0;
};

/// A one-dimensional potential V(z) on z > 0 with analytic derivatives.
class Potential {
 public:
  virtual ~Potential() = default;

  virtual PotentialJet jet(double z) const = 0;
  double operator()(double z) const { return jet(z).v; }

  /// Points where V jumps; derivatives are only meaningful between them.
  virtual std::vector<double> discontinuities() const { return {}; }

  /// Points where V or a low derivative is not smooth (includes the jumps).
  virtual std::vector<double> breakpoints() const { return discontinuities(); }

  virtual std::string describe() const = 0;
};

using PotentialPtr = std::shared_ptr<const Potential>;

class ZeroPotential final : public Potential {
 public:
  PotentialJet jet(double) const override { return {}; }
  std::string describe() const override { return "zero"; }
};

/// V(z) = -coefficient / z^exponent.
class PowerLawPotential final : public Potential {
 public:
  PowerLawPotential(double coefficient, double exponent);
  PotentialJet jet(double z) const override;
  std::string describe() const override;

  double coefficient() const { return coefficient_; }
  double exponent() const { return exponent_; }

 private:
  double coefficient_;
  double exponent_;
};

/// Piecewise-constant V: values[0] below edges[0], values[i] on
/// (edges[i-1], edges[i]), values.back() above edges.back().
class PiecewiseConstantPotential final : public Potential {
 public:
  PiecewiseConstantPotential(std::vector<double> edges, std::vector<double> values);
  PotentialJet jet(double z) const override;
  std::vector<double> discontinuities() const override { return edges_; }
  std::string describe() const override;

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> edges_;
  std::vector<double> values_;
};

}  // namespace badlands
