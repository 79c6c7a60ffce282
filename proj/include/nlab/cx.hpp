#pragma once

// Holomorphic extension of the eigenbases: complex tori C^2/Z^2, the complex
// quadric {z.z = 1} for the sphere. Growth rates in the adapted tube, and
// zero counting of complexified restrictions by the argument principle.

#include <complex>
#include <vector>

#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

namespace nlab::cx {

// Value of the unique holomorphic extension at a complexified point.
// Torus: complex trigonometry in zeta. Sphere: polynomial continuation of
// the harmonic to the quadric through z3-Gegenbauer recurrences and powers
// of z1 +- i z2. The disc has no complexification here and throws.
std::complex<double> eval_cx(const spectra::EigenFn& fn,
                             const geom::CxPoint& z);

// sqrt(rho): tube radius coordinate. Torus |Im zeta|; sphere
// (1/2) arccosh(sum |z_i|^2).
double grauert_sqrt_rho(const geom::CxPoint& z);

// u(z) = (1/lambda) log |phi^C(z)|^2. Minus infinity at exact zeros.
double growth_rate(const spectra::EigenFn& fn, const geom::CxPoint& z);

// L^2-normalized (z1 + i z2)^degree, the extension of the highest weight
// modulus pair; zero-free on every complexified geodesic of the real sphere.
std::complex<double> highest_weight_beam(int degree, const geom::CxPoint& z);

struct Rect {
  double t0 = 0.0, t1 = 1.0;    // real parameter range along the geodesic
  double tau0 = -0.1, tau1 = 0.1;  // imaginary range
};

struct ZeroCount {
  int count = 0;
  double winding_residual = 0.0;  // contour quadrature against the integer
  double cr_defect = 0.0;     // max disagreement of the two derivative routes
  double min_boundary_abs = 0.0;
  Rect rect;                  // rectangle actually used after nudges
  int nudges = 0;
};

// Zeros of g(w) = phi^C(E(gamma(t), tau)) inside the rectangle, counted by
// winding. The contour is refined until the phase is unambiguous; contours
// passing through a near-zero are nudged (at most 5 times). The derivative
// entering the reported quadrature residual is a centred imaginary-direction
// difference, cross-checked against the real-direction difference.
ZeroCount count_zeros_rect(const spectra::EigenFn& fn,
                           const geom::GeodesicSegment& g, Rect r);

struct ZeroSet {
  std::vector<std::complex<double>> zeros;
  bool complete = false;  // quadtree fully resolved and counts reconciled
};

// Quadtree subdivision of the rectangle down to isolated zeros, each polished
// by a complex Newton iteration.
ZeroSet zero_locations(const spectra::EigenFn& fn,
                       const geom::GeodesicSegment& g, Rect r);

// Zero density of the restriction along the real geodesic predicted by the
// wave direction: lambda |<k/|k|, xi>| / pi. Single torus wave only.
double predicted_intersection_density(const spectra::EigenFn& fn,
                                      const geom::GeodesicSegment& g);

// Real-axis zero count per unit length, from the located zeros in a thin
// strip |tau| <= tau_window.
double measured_real_zero_density(const spectra::EigenFn& fn,
                                  const geom::GeodesicSegment& g,
                                  double tau_window);

}  // namespace nlab::cx
