// Exact Laplace eigenbases of the model surfaces and the spectral machinery
// built on them: mode enumeration, evaluation with gradients, Weyl counts,
// sphere projection and Poisson kernels, and the smoothed spectral projector.
//
// Eigenvalue convention: Delta phi = lambda^2 phi with the geometer's sign,
// so lambda = |k| 2 pi on the torus, sqrt(N(N+1)) on the sphere, and a Bessel
// zero on the disc. All basis elements have unit L2 norm over the surface.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nlab/geom.hpp"

namespace nlab::spectra {

enum class Parity { Cos, Sin };
enum class BoundaryCondition { Dirichlet, Neumann };

BoundaryCondition parse_bc(const std::string& name);

// k = (0,0) with Cos parity is the constant mode. Otherwise k lies in the
// canonical half lattice (k1 > 0, or k1 == 0 and k2 > 0).
struct TorusMode {
  int k1 = 0, k2 = 0;
  Parity parity = Parity::Cos;
};

// Real basis: ord >= 0 pairs with cos(ord * theta), ord < 0 with sin(|ord| * theta).
struct SphereMode {
  int deg = 0;
  int ord = 0;
};

// Disc (ang, rad): rad-th radial zero for angular order ang. For Neumann
// ang = 0 the first radial index is the constant mode (lambda = 0).
struct DiscMode {
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  int ang = 0, rad = 1;
  Parity parity = Parity::Cos;
};

struct ModeIndex {
  geom::Surface surface = geom::Surface::Torus;
  std::variant<TorusMode, SphereMode, DiscMode> id;
  double lambda = 0.0;
  double lambda_sq = 0.0;
};

ModeIndex torus_mode(int k1, int k2, Parity parity);
ModeIndex torus_constant();
ModeIndex sphere_mode(int deg, int ord);
ModeIndex zonal_mode(int deg);
ModeIndex highest_weight_mode(int deg, Parity parity);
ModeIndex disc_mode(BoundaryCondition bc, int ang, int rad, Parity parity);

std::string mode_label(const ModeIndex& m);

// Finite real combination of basis modes sharing one eigenvalue.
struct EigenFn {
  geom::Surface surface = geom::Surface::Torus;
  double lambda = 0.0;
  double lambda_sq = 0.0;
  std::vector<std::pair<ModeIndex, double>> terms;
};

EigenFn eigenfn(const ModeIndex& m);
EigenFn combine(const std::vector<std::pair<ModeIndex, double>>& terms);

double eval(const EigenFn& fn, geom::Point p);

// Orthonormal-frame gradient: torus (d/dx1, d/dx2); sphere (d/dphi,
// (1/sin phi) d/dtheta); disc (d/dr, (1/r) d/dtheta). At chart poles the
// returned value is the limit along the chart with the singular coordinate
// clamped at 1e-9.
std::array<double, 2> grad(const EigenFn& fn, geom::Point p);

// Samples fn on every grid node (row-major), exploiting the separable
// structure of the basis. Equals pointwise eval up to roundoff.
std::vector<double> sample_grid(const EigenFn& fn, const geom::QuadGrid& grid);

// All basis modes with lambda <= lambda_max, sorted by (lambda, index order).
std::vector<ModeIndex> enumerate_modes(geom::Surface s, double lambda_max,
                                       BoundaryCondition bc = BoundaryCondition::Dirichlet);

struct WeylPoint {
  double lambda = 0.0;
  std::size_t count = 0;
  double main_term = 0.0;   // Area * lambda^2 / (4 pi)
  double remainder = 0.0;
};

std::vector<WeylPoint> weyl_counts(const std::vector<ModeIndex>& modes, geom::Surface s,
                                   const std::vector<double>& lambdas);

// ---- special function evaluators ----

double legendre_p(int deg, double x);
// Orthonormal associated Legendre factor: Y_{N,m} = pbar * {1, sqrt2 cos, sqrt2 sin}.
double assoc_legendre_norm(int deg, int ord, double cphi, double sphi);

// J_m(x) and J_m'(x), x >= 0.
struct BesselValue { double j; double jp; };
BesselValue bessel_j(int m, double x);

// First `count` positive zeros of J_m (Dirichlet) or of J_m' (Neumann; the
// conventional j'_{0,1} = 0 is not included here).
std::vector<double> bessel_zeros(int m, int count);
std::vector<double> bessel_deriv_zeros(int m, int count);

// ---- sphere kernels ----

// Degree-N spectral projection kernel via the addition theorem,
// (2N+1)/(4 pi) P_N(cos d(x,y)).
double projection_kernel(int deg, geom::Point x, geom::Point y);
// Same object assembled as sum_m Y_{N,m}(x) Y_{N,m}(y); the two routes are
// independent and are compared in tests.
double projection_kernel_modesum(int deg, geom::Point x, geom::Point y);

// Poisson kernel of e^{-tA}, A = sqrt(Delta + 1/4), as a function of
// geodesic distance r: closed form and truncated spectral sum.
double poisson_kernel_closed(double t, double r);
double poisson_kernel_spectral(double t, double r, int deg_max);

// ---- smoothed spectral projector ----

// rho has Fourier transform supported in [eps/2, eps] (evenized), built from
// the C-infinity bump exp(-1/(1-u^2)) and normalized so rho(0) = 1.
class SpectralFilter {
 public:
  explicit SpectralFilter(double eps);
  double eps() const { return eps_; }
  double rho_hat(double t) const;   // even in t
  double rho(double s) const;       // cosine transform, rho(0) == 1

 private:
  double eps_ = 0.0;
  double norm_ = 0.0;
  std::vector<double> node_, nodew_, bump_;
  std::vector<double> fine_node_, fine_nodew_, fine_bump_;
};

struct FilterApplication {
  double reconstruction_error_l2 = 0.0;  // || filtered fn - rho(0) fn ||_2
  double tail_bound = 0.0;               // sum over eigenvalues outside fn's
};

// Applies rho(lambda - sqrt(Delta)) to fn by expanding over `basis` with
// quadrature inner products on `grid`. Throws if the enumerated cutoff is
// below lambda + 10/eps (truncation would be meaningless).
FilterApplication apply_rho_filter(const SpectralFilter& filter, double lambda,
                                   const EigenFn& fn, const std::vector<ModeIndex>& basis,
                                   const geom::QuadGrid& grid);

// Filtered sphere kernel K_lambda(x,y) = sum_j rho(lambda - lambda_j)
// phi_j(x) phi_j(y) as a function of r = d(x,y); also dK/dr. deg_max must
// reach lambda + 10/eps.
void filtered_kernel_batch(const SpectralFilter& filter, double lambda, int deg_max,
                           const double* r, std::size_t n, double* k, double* dk);

}  // namespace nlab::spectra
