#pragma once

// L^p functionals of eigenfunctions, power-law sweeps over mode families,
// and the integral identities tying |phi| to the gradient on level sets.

#include <vector>

#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

namespace nlab::norms {

// Quadrature L^p norm; p = infinity routes to sup_norm. Requires p >= 1.
double lp_norm(const spectra::EigenFn& fn, const geom::QuadGrid& grid,
               double p);

// Grid argmax of |fn| refined by coordinate-wise golden-section passes, so
// maxima between nodes (or at the chart poles) are found to high accuracy.
double sup_norm(const spectra::EigenFn& fn, const geom::QuadGrid& grid);

// Critical L^p exponent for eigenfunction growth in dimension 2:
// (1/2)(1/2 - 1/p) below the breakpoint p = 6, 1/2 - 2/p above.
double sogge_delta(double p);
inline constexpr double kSoggeBreakpoint = 6.0;

enum class Family {
  SphereZonal,         // (N, 0)
  SphereHighestWeight, // (N, N), cos parity
  TorusRay,            // k = M * (ray_a, ray_b)
  DiscRadial,          // Dirichlet (0, n)
};

struct SweepPoint {
  double lambda = 0.0;
  double value = 0.0;
};

struct PowerFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double r2 = 0.0;
};

// L^p norm along a mode family; `index` is N / M / n per family. One shared
// quadrature grid of the given resolution is used for every member.
std::vector<SweepPoint> family_norm_sweep(Family family, double p,
                                          const std::vector<int>& index,
                                          int resolution, int ray_a = 3,
                                          int ray_b = 4);

// Least-squares slope of log(value) against log(lambda).
PowerFit scaling_fit(const std::vector<SweepPoint>& pts);

// Multiplier f in the identity  integral |phi| (lap f + lambda^2 f) dV =
// 2 integral_N f |grad phi| dS  (lap = chart Laplace-Beltrami). One is
// available everywhere; FirstHarmonic is cos(2 pi x1) on the torus and
// cos(phi) on the sphere, both eigenfunctions of the Laplacian themselves.
enum class DongWeight { One, FirstHarmonic };

struct IdentityReport {
  double lhs = 0.0;            // volume side
  double rhs = 0.0;            // curve side
  double rel_residual = 0.0;   // |lhs-rhs| over the largest integrand mass
  double curve_length = 0.0;
};

IdentityReport dong_identity(const spectra::EigenFn& fn, DongWeight weight,
                             int resolution);

// lambda^2 integral_{phi >= c} phi dV = integral_{phi = c} |grad phi| dS.
// Throws if c is out of range or the level is too close to a critical value
// of phi (the curve integral would be unreliable there).
IdentityReport level_set_identity(const spectra::EigenFn& fn, double c,
                                  int resolution);

// Hoelder lower bound ||phi||_1 >= ||phi||_2^3 / ||phi||_4^2, evaluated with
// one consistent quadrature.
struct HolderReport {
  double l1 = 0.0, l2 = 0.0, l4 = 0.0;
  double lower = 0.0;
  bool ok = false;
};

HolderReport l1_lower_check(const spectra::EigenFn& fn,
                            const geom::QuadGrid& grid);

}  // namespace nlab::norms
