// Model surfaces (unit flat torus, round unit sphere, unit disc), geodesics,
// their complexifications into the Grauert tube, and quadrature grids.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace nlab::geom {

enum class Surface { Torus, Sphere, Disc };

Surface parse_surface(const std::string& name);
const char* surface_name(Surface s);
double surface_area(Surface s);
int genus(Surface s);

// Chart coordinates:
//   torus  (a,b) = (x1,x2), each mod 1
//   sphere (a,b) = (phi, theta), colatitude phi in [0,pi]
//   disc   (a,b) = (r, theta), r in [0,1]
struct Point {
  double a = 0.0;
  double b = 0.0;
};

// Wraps periodic coordinates into canonical ranges; throws
// std::invalid_argument for out-of-range non-periodic coordinates
// (sphere phi, disc r).
Point canonical(Surface s, Point p);

double distance(Surface s, Point p, Point q);

std::array<double, 3> sphere_embed(Point p);
Point sphere_chart(const std::array<double, 3>& v);

// Unit-speed geodesic. Spheres carry the orthonormal frame (fp, ft) of the
// great circle, gamma(t) = cos(t) fp + sin(t) ft; the torus carries base and
// unit direction. Disc geodesic flow is not supported.
struct GeodesicSegment {
  Surface surface = Surface::Torus;
  Point base;
  std::array<double, 2> dir{1.0, 0.0};
  double length = 0.0;
  bool closed = false;
  std::array<double, 3> fp{0.0, 0.0, 0.0};
  std::array<double, 3> ft{0.0, 0.0, 0.0};
};

// Closed torus geodesic in primitive lattice direction (p,q); length is
// loops * sqrt(p^2+q^2).
GeodesicSegment torus_closed_geodesic(Point base, int p, int q, int loops = 1);
GeodesicSegment torus_segment(Point base, std::array<double, 2> dir, double length);

// Great circle through base; azimuth is the angle of the initial tangent
// measured from the south-pointing coordinate direction e_phi toward e_theta.
// Closed iff length is an integer multiple of 2*pi.
GeodesicSegment sphere_great_circle(Point base, double azimuth, double length);
GeodesicSegment sphere_equator(double length);

Point geodesic_point(const GeodesicSegment& g, double t);

// Point of the complexified geodesic at parameter w = t + i*tau. Tube
// membership is the caller's concern; see cx::grauert_sqrt_rho.
struct CxPoint {
  Surface surface = Surface::Torus;
  std::array<std::complex<double>, 2> zeta;  // torus chart, real parts mod 1
  std::array<std::complex<double>, 3> z;     // sphere quadric sum z_i^2 = 1
};

CxPoint complexified_geodesic_point(const GeodesicSegment& g, std::complex<double> w);

// Default Grauert-strip half width used for torus and sphere experiments.
inline constexpr double kDefaultStripHalfWidth = 0.4;

// Tensor quadrature grid: trapezoid in periodic directions, Gauss-Legendre in
// the transversal one (in u = cos phi on the sphere, in r on the disc). The
// node weight at (i,j) already contains the area element, so sum(weight) is
// the surface area. Column counts are odd on sphere/disc so that uniform
// theta sampling never locks phase with |cos(m theta)|^p integrands.
struct QuadGrid {
  Surface surface = Surface::Torus;
  int nrow = 0;
  int ncol = 0;
  std::vector<double> row;     // x1 / phi / r per row, ascending
  std::vector<double> col;     // x2 / theta per column, ascending
  std::vector<double> weight;  // nrow * ncol node weights
  bool row_periodic = false;
  bool col_periodic = false;
  double h = 0.0;  // nominal chart spacing

  std::size_t size() const { return std::size_t(nrow) * std::size_t(ncol); }
  std::size_t idx(int i, int j) const { return std::size_t(i) * ncol + j; }
  Point point(int i, int j) const { return {row[i], col[j]}; }
};

QuadGrid quadrature_grid(Surface s, int resolution);

// Gauss-Legendre nodes/weights on [a,b], ascending nodes.
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace nlab::geom
