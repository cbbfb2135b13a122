#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "badlands/reflection.hpp"

namespace badlands {

/// First three derivatives of a map at a point.
struct MapJet {
  double d1 = 0;
  double d2 = 0;
  double d3 = 0;
};

/// Smooth, strictly increasing coordinate change with its inverse.
struct CoordinateMap {
  std::function<double(double)> forward;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
};

/// {f, z} = f'''/f' - (3/2)(f''/f')^2.
double schwarzian(const MapJet& jet);

/// Derivatives of f at z by Ridders-extrapolated central differences.
MapJet numeric_jet(const std::function<double(double)>& f, double z);

/// Schwarzian of a sampled smooth function by numerical differentiation.
double schwarzian(const std::function<double(double)>& f, double z);

/// max over points of |{zhat, z} - (z~')^2 {zhat, z~} - {z~, z}| for
/// z~ = map1(z), zhat = map2(z~).
double cayley_compose_check(const std::function<double(double)>& map1, const std::function<double(double)>& map2,
                            std::span<const double> points);

/// Badlands function Q(z) from the analytic F jet; DomainError when F <= 0.
double badlands(const ScatteringProblem& problem, double z);

/// The WKB phase z -> phi(z) as a coordinate map (inverse by Newton).
CoordinateMap wkb_phase_map(const ScatteringProblem& problem);

/// Jet of the WKB phase map: phi' = sqrt F, phi'' = F'/(2 sqrt F), ...
MapJet wkb_phase_jet(const FJet& f);

struct LiouvilleSample {
  double z = 0;       // nm
  double zbold = 0;   // WKB phase
  double barrier = 0; // Q(z)
  double F = 0;       // 1/nm^2
};

/// Barrier problem psi'' + (1 - V(zbold)) psi = 0 at unit energy, with V = Q.
struct LiouvilleProblem {
  ScatteringProblem source;
  double energy = 1.0;
  double z_left = 0, z_right = 0;          // truncation in z, nm
  double zbold_left = 0, zbold_right = 0;  // same points in the transformed coordinate
  double barrier_cut = 1e-10;
  std::vector<LiouvilleSample> samples;    // increasing z
  LiouvilleSample peak;                    // maximum of Q, refined between samples
};

struct LiouvilleOptions {
  double barrier_cut = 1e-10;  // truncate where |Q| falls below this
  int samples_per_decade = 40;
  double identity_tol = 1e-8;  // pointwise check of the transformed F
};

/// Builds the transformed grid, verifying (F - {zbold, z}/2)/zbold'^2 = 1 - Q
/// at every sample; an identity violation throws InternalError.
LiouvilleProblem liouville_transform(const ScatteringProblem& problem, const LiouvilleOptions& opt = {});

struct NumerovSettings {
  double step = 0.01;        // fine step where the barrier is felt
  double tail_step = 0.2;    // step in the far tails
  double tail_cut = 1e-6;    // |Q| below which the coarse step is used
  double phase_per_step = 0.05;  // cap on h sqrt(max |1 - Q|)
};

/// Renormalized Numerov on the transformed problem with an outgoing wave at
/// the left end; r is referenced to the same gauge as integrate_amplitudes.
ReflectionResult scatter_transformed(const LiouvilleProblem& lp, NumerovSettings settings = {});

/// W = psi1 psi2' - psi1' psi2.
std::complex<double> wronskian(std::complex<double> psi1, std::complex<double> dpsi1, std::complex<double> psi2,
                               std::complex<double> dpsi2);

struct WavePoint {
  std::complex<double> psi;
  std::complex<double> dpsi;
};

/// psi~ = sqrt(z~') psi and its z~-derivative.
WavePoint to_transformed_frame(const WavePoint& w, const MapJet& map);

/// CSV: z_nm,phase_zbold,Q,F.
void write_badlands_csv(std::ostream& out, const LiouvilleProblem& lp);

}  // namespace badlands
