// Eigenbases of the three surfaces: eigenvalues, normalization, evaluation,
// enumeration, Weyl counts, kernels and the smoothed spectral projector.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

using namespace nlab;
using geom::Surface;
using spectra::BoundaryCondition;
using spectra::Parity;

namespace {
constexpr double kPi = std::numbers::pi;

double quad_inner(const spectra::EigenFn& f, const spectra::EigenFn& g,
                  const geom::QuadGrid& grid) {
  auto fv = spectra::sample_grid(f, grid);
  auto gv = spectra::sample_grid(g, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight[i] * fv[i] * gv[i];
  return s;
}
}  // namespace

TEST_CASE("eigenvalues follow the dispersion relation of each surface") {
  CHECK(spectra::torus_mode(3, 4, Parity::Cos).lambda ==
        doctest::Approx(10.0 * kPi).epsilon(1e-14));
  CHECK(spectra::torus_constant().lambda == 0.0);
  CHECK(spectra::sphere_mode(12, 5).lambda_sq == doctest::Approx(156.0).epsilon(1e-15));
  CHECK(spectra::zonal_mode(2).lambda == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));

  // classical Bessel zeros j_{0,1} and j_{2,3}
  CHECK(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 1, Parity::Cos).lambda ==
        doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(spectra::disc_mode(BoundaryCondition::Dirichlet, 2, 3, Parity::Cos).lambda ==
        doctest::Approx(11.619841172149059).epsilon(1e-13));
  // Neumann: j'_{1,1}, the constant mode, and the first zero of J_0'
  CHECK(spectra::disc_mode(BoundaryCondition::Neumann, 1, 1, Parity::Cos).lambda ==
        doctest::Approx(1.8411837813406593).epsilon(1e-13));
  CHECK(spectra::disc_mode(BoundaryCondition::Neumann, 0, 1, Parity::Cos).lambda == 0.0);
  CHECK(spectra::disc_mode(BoundaryCondition::Neumann, 0, 2, Parity::Cos).lambda ==
        doctest::Approx(3.8317059702075125).epsilon(1e-13));

  CHECK_THROWS_AS((void)spectra::torus_mode(0, 0, Parity::Cos), std::invalid_argument);
  CHECK_THROWS_AS((void)spectra::sphere_mode(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 1, Parity::Sin),
      std::invalid_argument);
}

TEST_CASE("basis elements are L2-normalized on their surface") {
  auto tg = geom::quadrature_grid(Surface::Torus, 96);
  for (auto m : {spectra::torus_constant(), spectra::torus_mode(1, 0, Parity::Cos),
                 spectra::torus_mode(3, 4, Parity::Sin)}) {
    auto f = spectra::eigenfn(m);
    CHECK(quad_inner(f, f, tg) == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto sg = geom::quadrature_grid(Surface::Sphere, 96);
  for (auto m : {spectra::zonal_mode(8), spectra::sphere_mode(12, 5),
                 spectra::sphere_mode(9, -4),
                 spectra::highest_weight_mode(12, Parity::Cos)}) {
    auto f = spectra::eigenfn(m);
    CHECK(quad_inner(f, f, sg) == doctest::Approx(1.0).epsilon(1e-12));
  }
  auto dg = geom::quadrature_grid(Surface::Disc, 128);
  for (auto m : {spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 1, Parity::Cos),
                 spectra::disc_mode(BoundaryCondition::Dirichlet, 2, 3, Parity::Cos),
                 spectra::disc_mode(BoundaryCondition::Neumann, 1, 1, Parity::Sin),
                 spectra::disc_mode(BoundaryCondition::Neumann, 0, 1, Parity::Cos)}) {
    auto f = spectra::eigenfn(m);
    CHECK(quad_inner(f, f, dg) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("distinct basis elements are orthogonal under the same quadrature") {
  auto tg = geom::quadrature_grid(Surface::Torus, 96);
  CHECK(std::abs(quad_inner(spectra::eigenfn(spectra::torus_mode(1, 0, Parity::Cos)),
                            spectra::eigenfn(spectra::torus_mode(1, 0, Parity::Sin)), tg)) <=
        1e-12);
  auto sg = geom::quadrature_grid(Surface::Sphere, 96);
  CHECK(std::abs(quad_inner(spectra::eigenfn(spectra::sphere_mode(8, 3)),
                            spectra::eigenfn(spectra::sphere_mode(8, -3)), sg)) <= 1e-12);
  CHECK(std::abs(quad_inner(spectra::eigenfn(spectra::sphere_mode(8, 3)),
                            spectra::eigenfn(spectra::sphere_mode(9, 3)), sg)) <= 1e-12);
  auto dg = geom::quadrature_grid(Surface::Disc, 128);
  CHECK(std::abs(quad_inner(
            spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 1, Parity::Cos)),
            spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 2, Parity::Cos)),
            dg)) <= 1e-10);
}

TEST_CASE("pointwise values match closed forms") {
  // torus plane wave sqrt2 cos(2 pi k.x)
  auto tm = spectra::eigenfn(spectra::torus_mode(2, 1, Parity::Cos));
  CHECK(spectra::eval(tm, {0.3, 0.7}) ==
        doctest::Approx(std::numbers::sqrt2 * std::cos(2.0 * kPi * 1.3)).epsilon(1e-14));
  CHECK(spectra::eval(spectra::eigenfn(spectra::torus_constant()), {0.9, 0.1}) == 1.0);

  // zonal degree 4 at cos(phi) = 0.3: P4(0.3) = (35 x^4 - 30 x^2 + 3)/8 = 0.0729375
  auto z4 = spectra::eigenfn(spectra::zonal_mode(4));
  CHECK(spectra::eval(z4, {std::acos(0.3), 1.23}) ==
        doctest::Approx(std::sqrt(9.0 / (4.0 * kPi)) * 0.0729375).epsilon(1e-13));
  // zonal value at the pole is the eigenspace sup sqrt((2N+1)/4pi)
  CHECK(spectra::eval(spectra::eigenfn(spectra::zonal_mode(9)), {0.0, 0.0}) ==
        doctest::Approx(std::sqrt(19.0 / (4.0 * kPi))).epsilon(1e-13));

  // |Y_{2,1}| = sqrt(15/4pi) |sin phi cos phi cos theta|
  auto y21 = spectra::eigenfn(spectra::sphere_mode(2, 1));
  const double phi = 1.0, theta = 0.4;
  CHECK(std::abs(spectra::eval(y21, {phi, theta})) ==
        doctest::Approx(std::sqrt(15.0 / (4.0 * kPi)) *
                        std::abs(std::sin(phi) * std::cos(phi) * std::cos(theta)))
            .epsilon(1e-13));

  // disc mode vanishes on the boundary (Dirichlet) and at interior radial zeros
  auto d02 = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 2, Parity::Cos));
  CHECK(std::abs(spectra::eval(d02, {1.0, 0.3})) <= 1e-12);
  const double j01 = 2.404825557695773, j02 = 5.520078110286311;
  CHECK(std::abs(spectra::eval(d02, {j01 / j02, 2.0})) <= 1e-12);
  // angular factorization: f(r, theta) = f(r, 0) cos(m theta)
  auto d21 = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 2, 1, Parity::Cos));
  CHECK(spectra::eval(d21, {0.6, 0.9}) ==
        doctest::Approx(spectra::eval(d21, {0.6, 0.0}) * std::cos(2.0 * 0.9)).epsilon(1e-13));
}

TEST_CASE("gradients agree with central differences in the orthonormal frame") {
  const double h = 1e-5;
  auto fd_check = [&](const spectra::EigenFn& fn, geom::Point p, double frame2) {
    auto g = spectra::grad(fn, p);
    double d1 = (spectra::eval(fn, {p.a + h, p.b}) - spectra::eval(fn, {p.a - h, p.b})) / (2 * h);
    double d2 = (spectra::eval(fn, {p.a, p.b + h}) - spectra::eval(fn, {p.a, p.b - h})) / (2 * h);
    CHECK(g[0] == doctest::Approx(d1).epsilon(2e-6));
    CHECK(g[1] == doctest::Approx(d2 / frame2).epsilon(2e-6));
  };
  fd_check(spectra::eigenfn(spectra::torus_mode(3, 4, Parity::Sin)), {0.37, 0.21}, 1.0);
  fd_check(spectra::eigenfn(spectra::sphere_mode(12, 5)), {1.1, 2.2}, std::sin(1.1));
  fd_check(spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 2, 3, Parity::Sin)),
           {0.55, 1.0}, 0.55);
  // pole limit stays finite
  auto g = spectra::grad(spectra::eigenfn(spectra::sphere_mode(5, 1)), {0.0, 0.0});
  CHECK(std::isfinite(g[0]));
  CHECK(std::isfinite(g[1]));
}

TEST_CASE("sample_grid agrees with pointwise eval") {
  struct Case { Surface s; spectra::ModeIndex m; };
  const Case cases[] = {
      {Surface::Torus, spectra::torus_mode(3, -2, Parity::Sin)},
      {Surface::Sphere, spectra::sphere_mode(11, -7)},
      {Surface::Disc, spectra::disc_mode(BoundaryCondition::Neumann, 3, 2, Parity::Cos)},
  };
  for (const auto& c : cases) {
    auto fn = spectra::eigenfn(c.m);
    auto grid = geom::quadrature_grid(c.s, 48);
    auto v = spectra::sample_grid(fn, grid);
    REQUIRE(v.size() == grid.size());
    double worst = 0.0;
    for (int i = 0; i < grid.nrow; ++i)
      for (int j = 0; j < grid.ncol; ++j)
        worst = std::max(worst,
                         std::abs(v[grid.idx(i, j)] - spectra::eval(fn, grid.point(i, j))));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("enumerate_modes returns exactly the spectrum below the cutoff") {
  // torus: 1 constant + 2 parities per half-lattice vector with |k| <= 2.5,
  // i.e. |k|^2 in {1, 2, 4, 5} -> 4+4+4+8 = 20 plane waves
  auto tm = spectra::enumerate_modes(Surface::Torus, 5.0 * kPi);
  CHECK(tm.size() == 21);
  // sphere: N(N+1) <= 400 stops at N = 19, total sum of (2N+1) is 20^2
  auto sm = spectra::enumerate_modes(Surface::Sphere, 20.0);
  CHECK(sm.size() == 400);
  // disc Dirichlet below 6: j01, j02, j11 (x2), j21 (x2); j31 = 6.38 is out
  auto dm = spectra::enumerate_modes(Surface::Disc, 6.0, BoundaryCondition::Dirichlet);
  CHECK(dm.size() == 6);
  // disc Neumann below 4: constant, j'01 = 3.83, j'11 (x2), j'21 = 3.05 (x2)
  auto nm = spectra::enumerate_modes(Surface::Disc, 4.0, BoundaryCondition::Neumann);
  CHECK(nm.size() == 6);

  for (const auto* modes : {&tm, &sm, &dm, &nm}) {
    for (std::size_t i = 0; i < modes->size(); ++i) {
      CHECK((*modes)[i].lambda <= doctest::Approx(20.01));
      if (i) CHECK((*modes)[i].lambda >= (*modes)[i - 1].lambda - 1e-12);
    }
  }
  CHECK(tm.front().lambda == 0.0);
  CHECK(sm.front().lambda == 0.0);
  CHECK(nm.front().lambda == 0.0);
}

TEST_CASE("weyl counts carry the area main term and the exact remainder") {
  auto tm = spectra::enumerate_modes(Surface::Torus, 20.0);
  auto tw = spectra::weyl_counts(tm, Surface::Torus, {5.0 * kPi});
  REQUIRE(tw.size() == 1);
  CHECK(tw[0].count == 21);
  CHECK(tw[0].main_term == doctest::Approx(6.25 * kPi).epsilon(1e-14));
  CHECK(tw[0].remainder ==
        doctest::Approx(21.0 - 6.25 * kPi).epsilon(1e-12));

  // at integer lambda = M the sphere count is M^2, exactly the main term
  auto sm = spectra::enumerate_modes(Surface::Sphere, 21.0);
  auto sw = spectra::weyl_counts(sm, Surface::Sphere, {10.0, 9.5, 20.0});
  CHECK(sw[0].count == 100);
  CHECK(sw[0].remainder == doctest::Approx(0.0));
  CHECK(sw[1].count == 100);
  CHECK(sw[1].remainder == doctest::Approx(100.0 - 90.25).epsilon(1e-12));
  CHECK(sw[2].count == 400);
  CHECK(sw[2].remainder == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)spectra::weyl_counts(sm, Surface::Sphere, {25.0}),
                  std::invalid_argument);
}

TEST_CASE("legendre and bessel evaluators hit classical values") {
  CHECK(spectra::legendre_p(4, 0.3) == doctest::Approx(0.0729375).epsilon(1e-14));
  CHECK(spectra::legendre_p(6, 0.0) == doctest::Approx(-0.3125).epsilon(1e-14));
  CHECK(spectra::legendre_p(10, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(spectra::legendre_p(9, -1.0) == doctest::Approx(-1.0).epsilon(1e-13));

  // the alternating series behind bessel_j cancels to ~e^x * eps absolute
  // error, so the larger zeros carry a few extra ulps
  auto z0 = spectra::bessel_zeros(0, 5);
  const double j0[] = {2.404825557695773, 5.520078110286311, 8.653727912911013,
                       11.79153443901428, 14.93091770848779};
  REQUIRE(z0.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(z0[i] == doctest::Approx(j0[i]).epsilon(1e-11));
  CHECK(spectra::bessel_zeros(2, 3).back() ==
        doctest::Approx(11.619841172149059).epsilon(1e-11));
  CHECK(spectra::bessel_deriv_zeros(1, 1)[0] ==
        doctest::Approx(1.8411837813406593).epsilon(1e-13));
  CHECK(spectra::bessel_deriv_zeros(0, 1)[0] ==
        doctest::Approx(3.8317059702075125).epsilon(1e-13));

  // J0' = -J1 and J0(0) = 1
  auto b0 = spectra::bessel_j(0, 1.7);
  auto b1 = spectra::bessel_j(1, 1.7);
  CHECK(b0.jp == doctest::Approx(-b1.j).epsilon(1e-13));
  CHECK(spectra::bessel_j(0, 0.0).j == doctest::Approx(1.0));
  CHECK(spectra::bessel_j(5, 0.0).j == doctest::Approx(0.0));
  CHECK(std::abs(spectra::bessel_j(0, j0[0]).j) <= 1e-12);
}

TEST_CASE("projection kernel: addition theorem equals the mode sum") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uphi(0.1, kPi - 0.1), uth(0.0, 2.0 * kPi);
  for (int deg : {3, 8, 13}) {
    for (int trial = 0; trial < 8; ++trial) {
      geom::Point x{uphi(rng), uth(rng)}, y{uphi(rng), uth(rng)};
      double a = spectra::projection_kernel(deg, x, y);
      double b = spectra::projection_kernel_modesum(deg, x, y);
      CHECK(a == doctest::Approx(b).epsilon(1e-11));
    }
    geom::Point x{uphi(rng), uth(rng)};
    CHECK(spectra::projection_kernel(deg, x, x) ==
          doctest::Approx((2.0 * deg + 1.0) / (4.0 * kPi)).epsilon(1e-13));
  }
}

TEST_CASE("poisson kernel closed form matches the spectral sum") {
  for (double r : {0.2, 1.0, 2.8}) {
    double closed = spectra::poisson_kernel_closed(0.5, r);
    double sum = spectra::poisson_kernel_spectral(0.5, r, 80);
    CHECK(closed == doctest::Approx(sum).epsilon(1e-10));
  }
  CHECK_THROWS_AS((void)spectra::poisson_kernel_closed(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("spectral filter: band-limited transform, unit normalization") {
  spectra::SpectralFilter f(0.5);
  CHECK(f.eps() == 0.5);
  CHECK(f.rho_hat(0.10) == 0.0);   // below the support [eps/2, eps]
  CHECK(f.rho_hat(0.55) == 0.0);   // above it
  CHECK(f.rho_hat(0.375) > 0.0);   // middle of the band
  CHECK(f.rho_hat(-0.375) == doctest::Approx(f.rho_hat(0.375)).epsilon(1e-15));
  CHECK(f.rho(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(spectra::SpectralFilter(-1.0), std::invalid_argument);
}

TEST_CASE("rho filter reproduces an eigenfunction and enforces its cutoff") {
  auto fn = spectra::eigenfn(spectra::torus_mode(1, 0, Parity::Cos));
  spectra::SpectralFilter filter(0.5);
  auto grid = geom::quadrature_grid(Surface::Torus, 64);
  auto basis = spectra::enumerate_modes(Surface::Torus, 30.0);
  auto rep = spectra::apply_rho_filter(filter, fn.lambda, fn, basis, grid);
  CHECK(rep.reconstruction_error_l2 <= 1e-8);
  CHECK(rep.tail_bound >= 0.0);

  auto short_basis = spectra::enumerate_modes(Surface::Torus, 20.0);
  CHECK_THROWS_AS(
      (void)spectra::apply_rho_filter(filter, fn.lambda, fn, short_basis, grid),
      std::invalid_argument);
}

TEST_CASE("filtered kernel derivative agrees with a finite difference") {
  spectra::SpectralFilter filter(0.5);
  const double lambda = std::sqrt(72.0);  // degree-8 cluster
  const int deg_max = 30;
  const double r[] = {0.3, 0.7, 1.2};
  double k[3], dk[3];
  spectra::filtered_kernel_batch(filter, lambda, deg_max, r, 3, k, dk);
  const double h = 1e-5;
  double rp[3], rm[3], kp[3], km[3];
  for (int i = 0; i < 3; ++i) { rp[i] = r[i] + h; rm[i] = r[i] - h; }
  spectra::filtered_kernel_batch(filter, lambda, deg_max, rp, 3, kp, nullptr);
  spectra::filtered_kernel_batch(filter, lambda, deg_max, rm, 3, km, nullptr);
  for (int i = 0; i < 3; ++i)
    CHECK(dk[i] == doctest::Approx((kp[i] - km[i]) / (2.0 * h)).epsilon(1e-5));
  CHECK_THROWS_AS(spectra::filtered_kernel_batch(filter, lambda, 20, r, 3, k, dk),
                  std::invalid_argument);
}

TEST_CASE("combine spans one eigenspace and rejects anything else") {
  auto fn = spectra::combine({{spectra::torus_mode(1, 0, Parity::Cos), 0.6},
                              {spectra::torus_mode(0, 1, Parity::Sin), 0.8}});
  CHECK(fn.lambda == doctest::Approx(2.0 * kPi));
  geom::Point p{0.15, 0.62};
  CHECK(spectra::eval(fn, p) ==
        doctest::Approx(0.6 * std::numbers::sqrt2 * std::cos(2.0 * kPi * p.a) +
                        0.8 * std::numbers::sqrt2 * std::sin(2.0 * kPi * p.b))
            .epsilon(1e-13));
  // orthonormal terms: coefficient vector norm is the L2 norm
  auto grid = geom::quadrature_grid(Surface::Torus, 64);
  CHECK(quad_inner(fn, fn, grid) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)spectra::combine({}), std::invalid_argument);
  CHECK_THROWS_AS((void)spectra::combine({{spectra::torus_mode(1, 0, Parity::Cos), 1.0},
                                          {spectra::torus_mode(1, 1, Parity::Cos), 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)spectra::combine({{spectra::torus_mode(1, 0, Parity::Cos), 1.0},
                                          {spectra::zonal_mode(4), 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("mode labels are distinct and boundary conditions parse") {
  CHECK(spectra::parse_bc("dirichlet") == BoundaryCondition::Dirichlet);
  CHECK(spectra::parse_bc("neumann") == BoundaryCondition::Neumann);
  CHECK_THROWS_AS((void)spectra::parse_bc("robin"), std::invalid_argument);
  CHECK(spectra::mode_label(spectra::torus_mode(2, -1, Parity::Sin)) == "torus[2,-1]sin");
  CHECK(spectra::mode_label(spectra::torus_constant()) == "torus[const]");
  CHECK(spectra::mode_label(spectra::sphere_mode(4, -4)) == "sphere[4,-4]");
  CHECK(spectra::mode_label(spectra::disc_mode(BoundaryCondition::Neumann, 2, 1, Parity::Cos)) ==
        "disc-n[2,1]cos");
}
