#include "nlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nlab/nodal.hpp"
#include "nlab/simd.hpp"
#include "nlab/util.hpp"

namespace nlab::norms {

namespace {

constexpr double kPi = std::numbers::pi;

double frame_grad_norm(const spectra::EigenFn& fn, geom::Point p) {
  auto g = spectra::grad(fn, p);
  return std::hypot(g[0], g[1]);
}

}  // namespace

double lp_norm(const spectra::EigenFn& fn, const geom::QuadGrid& grid,
               double p) {
  if (std::isinf(p)) return sup_norm(fn, grid);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  std::vector<double> v = spectra::sample_grid(fn, grid);
  double s = simd::weighted_abs_pow_sum(v.data(), grid.weight.data(), v.size(), p);
  return std::pow(s, 1.0 / p);
}

double sup_norm(const spectra::EigenFn& fn, const geom::QuadGrid& grid) {
  std::vector<double> v = spectra::sample_grid(fn, grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  int bi = int(best) / grid.ncol, bj = int(best) % grid.ncol;

  // local polish: alternating golden-section passes in the two chart
  // coordinates on a window of +-2 grid steps around the best node
  auto absval = [&](geom::Point p) {
    return std::abs(spectra::eval(fn, geom::canonical(grid.surface, p)));
  };
  double ra = grid.row[bi], rb = grid.col[bj];
  double stepa = (grid.surface == geom::Surface::Sphere ? kPi : 1.0) / grid.nrow;
  double stepb = (grid.surface == geom::Surface::Torus ? 1.0 : 2.0 * kPi) /
                 grid.ncol;
  double lo_a_lim = 0.0;
  double hi_a_lim = grid.surface == geom::Surface::Sphere ? kPi
                    : grid.surface == geom::Surface::Disc ? 1.0
                                                          : 1e300;
  if (grid.surface == geom::Surface::Torus) lo_a_lim = -1e300;
  for (int pass = 0; pass < 3; ++pass) {
    double lo = std::max(ra - 2.0 * stepa, lo_a_lim);
    double hi = std::min(ra + 2.0 * stepa, hi_a_lim);
    ra = golden_max([&](double t) { return absval({t, rb}); }, lo, hi, 60);
    rb = golden_max([&](double t) { return absval({ra, t}); },
                          rb - 2.0 * stepb, rb + 2.0 * stepb, 60);
  }
  return std::max(std::abs(v[best]), absval({ra, rb}));
}

double sogge_delta(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("sogge_delta: p must be >= 2");
  if (p <= kSoggeBreakpoint) return 0.5 * (0.5 - 1.0 / p);
  return 0.5 - 2.0 / p;
}

std::vector<SweepPoint> family_norm_sweep(Family family, double p,
                                          const std::vector<int>& index,
                                          int resolution, int ray_a,
                                          int ray_b) {
  geom::Surface s;
  switch (family) {
    case Family::SphereZonal:
    case Family::SphereHighestWeight:
      s = geom::Surface::Sphere;
      break;
    case Family::TorusRay:
      s = geom::Surface::Torus;
      break;
    case Family::DiscRadial:
      s = geom::Surface::Disc;
      break;
    default:
      throw std::invalid_argument("family_norm_sweep: unknown family");
  }
  geom::QuadGrid grid = geom::quadrature_grid(s, resolution);
  std::vector<SweepPoint> out;
  out.reserve(index.size());
  for (int n : index) {
    spectra::ModeIndex m;
    switch (family) {
      case Family::SphereZonal:
        m = spectra::zonal_mode(n);
        break;
      case Family::SphereHighestWeight:
        m = spectra::highest_weight_mode(n, spectra::Parity::Cos);
        break;
      case Family::TorusRay:
        m = spectra::torus_mode(n * ray_a, n * ray_b, spectra::Parity::Cos);
        break;
      case Family::DiscRadial:
        m = spectra::disc_mode(spectra::BoundaryCondition::Dirichlet, 0, n,
                               spectra::Parity::Cos);
        break;
    }
    out.push_back({m.lambda, lp_norm(spectra::eigenfn(m), grid, p)});
  }
  return out;
}

PowerFit scaling_fit(const std::vector<SweepPoint>& pts) {
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& q : pts) {
    x.push_back(q.lambda);
    y.push_back(q.value);
  }
  LineFit f = fit_loglog(x, y);
  return {f.slope, f.slope_stderr, f.r2};
}

namespace {

struct WeightFn {
  std::function<double(geom::Point)> f;
  std::function<double(geom::Point)> lap;  // Laplace-Beltrami of f
};

WeightFn make_weight(geom::Surface s, DongWeight w) {
  if (w == DongWeight::One)
    return {[](geom::Point) { return 1.0; }, [](geom::Point) { return 0.0; }};
  switch (s) {
    case geom::Surface::Torus:
      return {[](geom::Point p) { return std::cos(2.0 * kPi * p.a); },
              [](geom::Point p) {
                return -4.0 * kPi * kPi * std::cos(2.0 * kPi * p.a);
              }};
    case geom::Surface::Sphere:
      // cos(phi) is the degree-1 zonal harmonic, eigenvalue 2
      return {[](geom::Point p) { return std::cos(p.a); },
              [](geom::Point p) { return -2.0 * std::cos(p.a); }};
    default:
      throw std::invalid_argument(
          "dong_identity: FirstHarmonic weight needs torus or sphere");
  }
}

}  // namespace

IdentityReport dong_identity(const spectra::EigenFn& fn, DongWeight weight,
                             int resolution) {
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("dong_identity: lambda must be positive");
  WeightFn w = make_weight(fn.surface, weight);
  geom::QuadGrid grid = geom::quadrature_grid(fn.surface, resolution);
  nodal::GridField field = nodal::make_field(fn, grid);

  IdentityReport rep;
  // Both sides can vanish by symmetry (for a pure mode the harmonic weight is
  // orthogonal to |phi|, and the weight itself can vanish on the zero set), so
  // the residual is measured against the triangle-inequality mass of the
  // volume integrand, which no cancellation can kill.
  double lhs_abs = 0.0;
  const double lam2 = fn.lambda_sq;
  for (int i = 0; i < grid.nrow; ++i) {
    for (int j = 0; j < grid.ncol; ++j) {
      std::size_t id = grid.idx(i, j);
      geom::Point p = grid.point(i, j);
      const double mult = lam2 * w.f(p) + w.lap(p);
      rep.lhs += grid.weight[id] * std::abs(field.value[id]) * mult;
      lhs_abs += grid.weight[id] * std::abs(field.value[id]) *
                 (lam2 * std::abs(w.f(p)) + std::abs(w.lap(p)));
    }
  }
  nodal::CurveSet curves = nodal::extract_nodal(field);
  rep.curve_length = curves.total_length;
  rep.rhs = 2.0 * nodal::integrate_over_curves(
                      fn.surface, curves,
                      [&](geom::Point p) { return w.f(p) * frame_grad_norm(fn, p); });
  const double rhs_abs =
      2.0 * nodal::integrate_over_curves(fn.surface, curves, [&](geom::Point p) {
        return std::abs(w.f(p)) * frame_grad_norm(fn, p);
      });
  const double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), lhs_abs, rhs_abs});
  rep.rel_residual = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
  return rep;
}

IdentityReport level_set_identity(const spectra::EigenFn& fn, double c,
                                  int resolution) {
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("level_set_identity: lambda must be positive");
  geom::QuadGrid grid = geom::quadrature_grid(fn.surface, resolution);
  nodal::GridField field = nodal::make_field(fn, grid);
  if (std::abs(c) >= field.max_abs)
    throw std::invalid_argument("level_set_identity: level outside range of fn");

  nodal::CurveSet curves = nodal::extract_level(field, c);
  double min_grad = std::numeric_limits<double>::infinity();
  for (const auto& pl : curves.curves)
    for (const auto& p : pl.pts)
      min_grad = std::min(min_grad, frame_grad_norm(fn, p));
  if (!(min_grad > 1e-3 * fn.lambda * field.max_abs))
    throw std::runtime_error("level_set_identity: level too close to critical value");

  IdentityReport rep;
  rep.curve_length = curves.total_length;
  for (std::size_t id = 0; id < field.value.size(); ++id)
    if (field.value[id] >= c) rep.lhs += grid.weight[id] * field.value[id];
  rep.lhs *= fn.lambda_sq;
  rep.rhs = nodal::integrate_over_curves(
      fn.surface, curves,
      [&](geom::Point p) { return frame_grad_norm(fn, p); });
  double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_residual = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
  return rep;
}

HolderReport l1_lower_check(const spectra::EigenFn& fn,
                            const geom::QuadGrid& grid) {
  HolderReport rep;
  rep.l1 = lp_norm(fn, grid, 1.0);
  rep.l2 = lp_norm(fn, grid, 2.0);
  rep.l4 = lp_norm(fn, grid, 4.0);
  rep.lower = rep.l2 * rep.l2 * rep.l2 / (rep.l4 * rep.l4);
  rep.ok = rep.l1 >= rep.lower * (1.0 - 1e-12);
  return rep;
}

}  // namespace nlab::norms
