#pragma once

// Zero sets of eigenfunctions sampled on quadrature grids: curve extraction,
// sign-domain decomposition, and combinatorics of the nodal set seen as an
// embedded graph.

#include <cstdint>
#include <functional>
#include <vector>

#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

namespace nlab::nodal {

// Eigenfunction samples on a grid. Samples that land exactly on zero are
// nudged to +1e-14 * max_abs so that sign-based processing never sees a 0.
struct GridField {
  geom::QuadGrid grid;
  std::vector<double> value;
  double lambda = 0.0;
  double max_abs = 0.0;  // sup of |value| before the nudge
};

GridField make_field(const spectra::EigenFn& fn, const geom::QuadGrid& grid);

// Wraps externally produced samples (synthetic test inputs).
GridField make_field_values(geom::QuadGrid grid, std::vector<double> values,
                            double lambda);

struct Polyline {
  std::vector<geom::Point> pts;  // chart coordinates
  bool closed = false;
  double length = 0.0;  // Riemannian arc length of the chord chain
};

struct CurveSet {
  std::vector<Polyline> curves;
  double total_length = 0.0;
};

// Marching-squares extraction of {f = 0}, resp. {f = c}. Saddle cells are
// resolved by the sign of the bilinear value at the cell centre.
CurveSet extract_nodal(const GridField& f);
CurveSet extract_level(const GridField& f, double c);

// Line integral of `density` along the extracted curves: midpoint rule per
// chord, wrap-aware in periodic chart directions.
double integrate_over_curves(geom::Surface s, const CurveSet& cs,
                             const std::function<double(geom::Point)>& density);

struct Domains {
  std::vector<int32_t> label;  // per grid node, 0-based domain id
  int count = 0;
  std::vector<double> area;  // quadrature area per domain
  std::vector<int> sign;     // +1 / -1 per domain
};

// Connected components of {f > 0} and {f < 0} under 4-adjacency,
// respecting the grid's periodic identifications.
Domains count_domains(const GridField& f);

struct InnerRadiusReport {
  int domains = 0;
  double bound = 0.0;           // area lower bound pi*j01^2 / lambda^2
  double min_area = 0.0;        // smallest domain area found
  double min_margin_rel = 0.0;  // min over domains of area/bound - 1
};

// Every sign domain must hold at least a disc worth of area at wavelength
// scale. Negative margin means a violation (or under-resolution). The
// constant is the flat-plane one, exact for torus and disc domains; large
// spherical domains can undershoot it (a hemisphere holds 2pi of area
// against a bound of pi*j01^2/2).
InnerRadiusReport faber_krahn_check(const GridField& f);

struct NodalGraph {
  bool odd = false;   // fn is odd across gamma (gamma lies in the zero set)
  int v = 0;          // vertices of the embedded graph
  int e = 0;          // edges
  int f = 0;          // faces (complementary domains)
  int m = 0;          // connected components of the graph
  int genus = 0;      // genus of the ambient surface
  int n_gamma = 0;    // odd: singular zeros on gamma; even: #(zero set ^ gamma)
  int euler_lhs = 0;  // v - e + f - m, must be >= 1 - 2*genus
  int formula_bound = 0;  // odd: n+2-2g,  even: ceil(n/2)+1-g
  int face_bound = 0;     // odd: f,       even: ceil(f/2)
};

// Builds the embedded graph cut out by the zero set (odd case: the function
// is odd under the reflection fixing gamma, so gamma is part of the zero
// set; even case: the zero set together with gamma). Throws if fn has no
// definite parity across gamma or gamma is not closed.
NodalGraph euler_graph(const spectra::EigenFn& fn,
                       const geom::GeodesicSegment& gamma, int resolution);

struct SmallBallReport {
  bool pass = false;
  double worst_need =
      0.0;  // max over centres of lambda * (radius needed for a sign change)
  geom::Point worst_center{0.0, 0.0};
  int trials = 0;
};

// Checks that every geodesic ball of radius a/lambda contains a sign change
// of fn, at `trials` seeded random centres. Torus and sphere only.
SmallBallReport small_ball_check(const spectra::EigenFn& fn, double a,
                                 int trials, uint64_t seed);

// Smallest constant a that would make small_ball_check pass on this sample.
double calibrate_small_ball(const spectra::EigenFn& fn, int trials,
                            uint64_t seed);

struct LocalFit {
  int order = 0;                 // vanishing order at the base point
  std::vector<double> coeff;     // c_j * x^(k-j) * y^j, j = 0..k
  double laplacian_residual_rel = 0.0;  // harmonicity defect of the leading term
};

// Fits the leading homogeneous polynomial of fn in normal coordinates at a
// zero. The leading term of an eigenfunction is harmonic, so the residual
// should vanish up to curvature and truncation effects.
LocalFit leading_polynomial_fit(const spectra::EigenFn& fn, geom::Point zero);

}  // namespace nlab::nodal
