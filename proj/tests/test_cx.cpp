// Holomorphic extensions: growth rates in the tube, beams, and zero counting
// of complexified restrictions by the argument principle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nlab/cx.hpp"
#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

using namespace nlab;
using geom::Surface;
using spectra::Parity;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eval_cx restricts to the real function on the real axis") {
  auto tg = geom::torus_closed_geodesic({0.2, 0.5}, 2, 1);
  auto tfn = spectra::combine({{spectra::torus_mode(1, 2, Parity::Cos), 0.8},
                               {spectra::torus_mode(2, -1, Parity::Sin), 0.6}});
  for (double t : {0.0, 0.7, 1.9}) {
    auto z = geom::complexified_geodesic_point(tg, {t, 0.0});
    auto v = cx::eval_cx(tfn, z);
    CHECK(v.real() == doctest::Approx(spectra::eval(tfn, geom::geodesic_point(tg, t)))
                          .epsilon(1e-12));
    CHECK(std::abs(v.imag()) <= 1e-12);
  }

  auto gc = geom::sphere_great_circle({0.9, 1.4}, 0.6, 2.0 * kPi);
  for (auto mode : {spectra::zonal_mode(6), spectra::sphere_mode(7, 3),
                    spectra::sphere_mode(7, -7)}) {
    auto fn = spectra::eigenfn(mode);
    for (double t : {0.4, 3.1}) {
      auto z = geom::complexified_geodesic_point(gc, {t, 0.0});
      CHECK(cx::eval_cx(fn, z).real() ==
            doctest::Approx(spectra::eval(fn, geom::geodesic_point(gc, t))).epsilon(1e-10));
      CHECK(std::abs(cx::eval_cx(fn, z).imag()) <= 1e-10);
    }
  }

  auto disc = spectra::eigenfn(
      spectra::disc_mode(spectra::BoundaryCondition::Dirichlet, 1, 1, Parity::Cos));
  geom::CxPoint dummy;
  dummy.surface = Surface::Disc;
  CHECK_THROWS_AS((void)cx::eval_cx(disc, dummy), std::invalid_argument);
}

TEST_CASE("grauert tube radius is the imaginary displacement along geodesics") {
  auto tg = geom::torus_closed_geodesic({0.1, 0.8}, 3, 4);
  auto gc = geom::sphere_great_circle({1.2, 0.3}, 1.1, 2.0 * kPi);
  for (double tau : {0.0, 0.05, -0.2, 0.35}) {
    auto zt = geom::complexified_geodesic_point(tg, {0.77, tau});
    CHECK(cx::grauert_sqrt_rho(zt) == doctest::Approx(std::abs(tau)).epsilon(1e-12));
    auto zs = geom::complexified_geodesic_point(gc, {2.3, tau});
    CHECK(cx::grauert_sqrt_rho(zs) == doctest::Approx(std::abs(tau)).epsilon(1e-12));
  }
}

TEST_CASE("torus growth rate follows the complex sine modulus exactly") {
  // u = (1/lambda) log(2 (sin^2 a + sinh^2 b)), a = 2 pi k.x(t), b = 2 pi (k.xi) tau
  auto fn = spectra::eigenfn(spectra::torus_mode(2, 1, Parity::Sin));
  auto g = geom::torus_closed_geodesic({0.3, 0.4}, 1, 0);  // xi = (1, 0), k.xi = 2
  for (auto [t, tau] : {std::pair{0.13, 0.2}, {0.61, -0.15}, {0.94, 0.3}}) {
    auto z = geom::complexified_geodesic_point(g, {t, tau});
    double a = 2.0 * kPi * (2.0 * (0.3 + t) + 1.0 * 0.4);
    double b = 2.0 * kPi * 2.0 * tau;
    double want = std::log(2.0 * (std::sin(a) * std::sin(a) +
                                  std::sinh(b) * std::sinh(b))) / fn.lambda;
    CHECK(cx::growth_rate(fn, z) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("sphere growth rates: oscillatory sector mode vs flat zonal plateau") {
  // |c cos(N w)|^2 = c^2 (cos^2(N t) + sinh^2(N tau)) on the equator
  const int N = 12;
  auto hw = spectra::eigenfn(spectra::highest_weight_mode(N, Parity::Cos));
  auto eq = geom::sphere_equator(2.0 * kPi);
  double c = spectra::assoc_legendre_norm(N, N, 0.0, 1.0) * std::numbers::sqrt2;
  for (auto [t, tau] : {std::pair{0.4, 0.1}, {1.7, -0.25}, {2.9, 0.02}}) {
    auto z = geom::complexified_geodesic_point(eq, {t, tau});
    double ct = std::cos(N * t), sh = std::sinh(N * tau);
    double want = std::log(c * c * (ct * ct + sh * sh)) / hw.lambda;
    CHECK(cx::growth_rate(hw, z) == doctest::Approx(want).epsilon(1e-11));
  }

  // the zonal extension is constant on the complexified equator (z3 = 0)
  auto zon = spectra::eigenfn(spectra::zonal_mode(6));
  auto za = geom::complexified_geodesic_point(eq, {0.5, 0.2});
  auto zb = geom::complexified_geodesic_point(eq, {2.8, -0.3});
  CHECK(cx::growth_rate(zon, za) == doctest::Approx(cx::growth_rate(zon, zb)).epsilon(1e-12));
}

TEST_CASE("highest weight beam decays like exp(-N tau) off the real equator") {
  const int N = 9;
  auto eq = geom::sphere_equator(2.0 * kPi);
  for (auto [t, tau] : {std::pair{0.8, 0.2}, {2.1, 0.05}}) {
    auto z0 = geom::complexified_geodesic_point(eq, {t, 0.0});
    auto z1 = geom::complexified_geodesic_point(eq, {t, tau});
    double ratio = std::abs(cx::highest_weight_beam(N, z1)) /
                   std::abs(cx::highest_weight_beam(N, z0));
    CHECK(ratio == doctest::Approx(std::exp(-N * tau)).epsilon(1e-12));
  }
}

TEST_CASE("argument principle counts the six real zeros in a torus window") {
  // sqrt2 sin(6 pi zeta1) along x1: zeros at t = j/6 - 0.37 inside (0.01, 1.01)
  auto fn = spectra::eigenfn(spectra::torus_mode(3, 0, Parity::Sin));
  auto g = geom::torus_closed_geodesic({0.37, 0.61}, 1, 0);
  cx::Rect rect{0.01, 1.01, -0.3, 0.3};
  auto zc = cx::count_zeros_rect(fn, g, rect);
  CHECK(zc.count == 6);
  CHECK(zc.winding_residual <= 1e-6);
  CHECK(zc.cr_defect <= 1e-5);
  CHECK(zc.min_boundary_abs > 0.0);
  CHECK(zc.nudges <= 5);

  auto zs = cx::zero_locations(fn, g, rect);
  CHECK(zs.complete);
  REQUIRE(zs.zeros.size() == 6);
  for (int j = 0; j < 6; ++j) {
    double want = (j + 3.0) / 6.0 - 0.37;
    CHECK(zs.zeros[j].real() == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::abs(zs.zeros[j].imag()) <= 1e-9);
  }
}

TEST_CASE("argument principle counts the eight meridian zeros of the sector mode") {
  // cos(4 w) = 0 at w = pi/8 + j pi/4, all real
  auto fn = spectra::eigenfn(spectra::highest_weight_mode(4, Parity::Cos));
  auto eq = geom::sphere_equator(2.0 * kPi);
  cx::Rect rect{0.01, 2.0 * kPi + 0.01, -0.2, 0.2};
  auto zc = cx::count_zeros_rect(fn, eq, rect);
  CHECK(zc.count == 8);

  auto zs = cx::zero_locations(fn, eq, rect);
  CHECK(zs.complete);
  REQUIRE(zs.zeros.size() == 8);
  for (int j = 0; j < 8; ++j) {
    CHECK(zs.zeros[j].real() == doctest::Approx(kPi / 8.0 + j * kPi / 4.0).epsilon(1e-8));
    CHECK(std::abs(zs.zeros[j].imag()) <= 1e-8);
  }
}

TEST_CASE("real zero density matches the directional prediction") {
  auto g = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto fn = spectra::eigenfn(spectra::torus_mode(2, 3, Parity::Cos));
  double predicted = cx::predicted_intersection_density(fn, g);
  CHECK(predicted == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(cx::measured_real_zero_density(fn, g, 0.1) ==
        doctest::Approx(predicted).epsilon(1e-12));

  // orthogonal wave: no zeros transverse to the geodesic
  auto ortho = spectra::eigenfn(spectra::torus_mode(0, 2, Parity::Sin));
  CHECK(cx::predicted_intersection_density(ortho, g) == doctest::Approx(0.0));
}
