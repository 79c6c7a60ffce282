// Restrictions to closed curves: sampling, Fourier data, sign changes,
// period-integral cluster sums, and the equatorial Fourier-weight profile.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlab/cx.hpp"
#include "nlab/geom.hpp"
#include "nlab/restrict.hpp"
#include "nlab/spectra.hpp"

using namespace nlab;
using geom::Surface;
using spectra::BoundaryCondition;
using spectra::Parity;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("geodesic sampling is dyadic and dense enough for the wavelength") {
  auto g = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto fn = spectra::eigenfn(spectra::torus_mode(16, 0, Parity::Cos));
  auto r = restriction::restrict_to_geodesic(fn, g);
  CHECK((r.count & (r.count - 1)) == 0);  // power of two
  CHECK(r.count >= 128);                  // 8 per wavelength, 16 wavelengths
  REQUIRE(r.values.size() == r.count);
  // spot value: phi(t, 0) = sqrt2 cos(2 pi 16 t)
  double t = r.length * 3.0 / double(r.count);
  CHECK(r.values[3] == doctest::Approx(std::numbers::sqrt2 * std::cos(32.0 * kPi * t))
                           .epsilon(1e-12));

  auto disc = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 1, 1, Parity::Cos));
  CHECK_THROWS_AS((void)restriction::restrict_to_geodesic(disc, g), std::invalid_argument);
  CHECK_THROWS_AS((void)restriction::restrict_to_geodesic(
                      spectra::eigenfn(spectra::zonal_mode(3)), g),
                  std::invalid_argument);
}

TEST_CASE("orbital Fourier data of a pure wave is a two-line spectrum") {
  // phi(t) = sqrt2 cos(6 pi t) on the unit loop: nu(+-3) = sqrt2/2
  auto g = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto fn = spectra::eigenfn(spectra::torus_mode(3, 0, Parity::Cos));
  auto r = restriction::restrict_to_geodesic(fn, g);
  auto fd = restriction::orbital_fourier(r);
  REQUIRE(fd.coeff.size() == r.count);
  CHECK(std::abs(fd.coeff[3] - std::numbers::sqrt2 / 2.0) <= 1e-12);
  CHECK(std::abs(fd.coeff[r.count - 3] - std::numbers::sqrt2 / 2.0) <= 1e-12);
  double off = 0.0;
  for (std::size_t n = 0; n < fd.coeff.size(); ++n)
    if (n != 3 && n != r.count - 3) off = std::max(off, std::abs(fd.coeff[n]));
  CHECK(off <= 1e-12);
  // Parseval: mean |phi|^2 = sum |nu|^2 = 1
  CHECK(fd.parseval_rel <= 1e-12);

  auto open = geom::torus_segment({0.0, 0.0}, {1.0, 0.0}, 0.5);
  auto ro = restriction::restrict_to_geodesic(fn, open);
  CHECK_THROWS_AS((void)restriction::orbital_fourier(ro), std::invalid_argument);
}

TEST_CASE("sign changes along the curve count the zero crossings") {
  // base 0.05 keeps the dyadic samples of cos(6 pi (t + 0.05)) away from its
  // zeros and peaks: 6 crossings, no near-zero samples, peak within one
  // sample spacing of sqrt2
  auto g = geom::torus_closed_geodesic({0.05, 0.0}, 1, 0);
  auto fn = spectra::eigenfn(spectra::torus_mode(3, 0, Parity::Cos));
  auto sc = restriction::sign_changes(restriction::restrict_to_geodesic(fn, g));
  CHECK(sc.count == 6);
  CHECK(sc.count % 2 == 0);
  CHECK(!sc.near_zero_flag);
  CHECK(sc.max_abs >= 1.41);
  CHECK(sc.max_abs <= std::numbers::sqrt2 + 1e-12);

  // through the origin the quarter-period samples land exactly on zeros,
  // which the report must flag (the skipped zeros keep the count at 6)
  auto g0 = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto sc0 = restriction::sign_changes(restriction::restrict_to_geodesic(fn, g0));
  CHECK(sc0.count == 6);
  CHECK(sc0.near_zero_flag);

  // density predicted from the wave direction: lambda |<k_hat, xi>| / pi = 4
  auto k23 = spectra::eigenfn(spectra::torus_mode(2, 3, Parity::Cos));
  CHECK(cx::predicted_intersection_density(k23, g) ==
        doctest::Approx(4.0).epsilon(1e-12));
  auto sc23 = restriction::sign_changes(restriction::restrict_to_geodesic(k23, g));
  CHECK(sc23.count == 4);
}

TEST_CASE("boundary restriction of disc modes") {
  // Dirichlet data vanishes on r = 1
  auto dir = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 2, 3, Parity::Cos));
  auto rb = restriction::restrict_to_boundary(dir);
  CHECK(rb.curve.closed);
  double worst = 0.0;
  for (double v : rb.values) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-10);

  // Neumann data oscillates as cos(2 theta): 4 sign changes, clean spectrum
  auto neu = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Neumann, 2, 1, Parity::Cos));
  auto nb = restriction::restrict_to_boundary(neu);
  auto sc = restriction::sign_changes(nb);
  CHECK(sc.count == 4);
  auto fd = restriction::orbital_fourier(nb);
  CHECK(std::abs(fd.coeff[2]) > 0.1);
  CHECK(fd.parseval_rel <= 1e-12);

  CHECK_THROWS_AS((void)restriction::restrict_to_boundary(
                      spectra::eigenfn(spectra::torus_mode(1, 0, Parity::Cos))),
                  std::invalid_argument);
}

TEST_CASE("kuznecov cluster sums: three routes to pi (2N+1) P_N(0)^2") {
  auto eq = geom::sphere_equator(2.0 * kPi);
  auto c4 = restriction::kuznecov_cluster(4, eq);
  // P_4(0) = 3/8
  const double closed4 = kPi * 9.0 * (3.0 / 8.0) * (3.0 / 8.0);
  CHECK(c4.closed_form == doctest::Approx(closed4).epsilon(1e-13));
  CHECK(c4.measured == doctest::Approx(closed4).epsilon(1e-8));
  CHECK(c4.dual_route == doctest::Approx(closed4).epsilon(1e-8));
  CHECK(c4.lambda == doctest::Approx(std::sqrt(20.0)));

  // odd degrees are annihilated on the equator
  auto c5 = restriction::kuznecov_cluster(5, eq);
  CHECK(c5.closed_form == 0.0);
  CHECK(std::abs(c5.measured) <= 1e-10);
  CHECK(std::abs(c5.dual_route) <= 1e-10);

  // a tilted great circle sees the same cluster sums as the equator
  auto tilted = geom::sphere_great_circle({1.1, 0.7}, 0.43, 2.0 * kPi);
  auto t4 = restriction::kuznecov_cluster(4, tilted);
  CHECK(t4.measured == doctest::Approx(closed4).epsilon(1e-8));

  CHECK_THROWS_AS((void)restriction::kuznecov_cluster(-1, eq), std::invalid_argument);
  CHECK_THROWS_AS((void)restriction::kuznecov_cluster(
                      4, geom::sphere_great_circle({kPi / 2, 0.0}, 0.3, 4.0 * kPi)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)restriction::kuznecov_cluster(4, geom::torus_closed_geodesic({0, 0}, 1, 0)),
      std::invalid_argument);
}

TEST_CASE("kuznecov partial sums grow linearly in lambda") {
  auto eq = geom::sphere_equator(2.0 * kPi);
  auto s = restriction::kuznecov_sum(24, eq, 8);
  REQUIRE(s.lambdas.size() == 25);
  REQUIRE(s.partial.size() == 25);
  for (std::size_t i = 1; i < s.partial.size(); ++i) {
    CHECK(s.partial[i] >= s.partial[i - 1] - 1e-12);
    CHECK(s.lambdas[i] > s.lambdas[i - 1]);
  }
  CHECK(s.exponent == doctest::Approx(1.0).epsilon(0.08));
  // the even/odd P_N(0)^2 staircase leaves real scatter around the fit
  CHECK(s.r2 > 0.98);
  CHECK_THROWS_AS((void)restriction::kuznecov_sum(5, eq), std::invalid_argument);
}

TEST_CASE("equatorial Fourier weights: exact mass, arcsine shape") {
  auto prof = restriction::qer_mode_profile(48);
  REQUIRE(prof.weight.size() == 49);
  double total = 0.0;
  for (double w : prof.weight) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(total == doctest::Approx(prof.total).epsilon(1e-12));
  CHECK(prof.total == doctest::Approx(97.0 / (4.0 * kPi)).epsilon(1e-10));
  // the highest weight pair dominates the zonal one on the equator
  CHECK(prof.weight[48] > prof.weight[0]);
  CHECK(prof.cdf_distance >= 0.0);
  CHECK(prof.cdf_distance <= 0.25);
  CHECK_THROWS_AS((void)restriction::qer_mode_profile(0), std::invalid_argument);
}

TEST_CASE("arcsine cdf endpoints and midpoints") {
  CHECK(restriction::arcsine_cdf(0.0) == doctest::Approx(0.0));
  CHECK(restriction::arcsine_cdf(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(restriction::arcsine_cdf(std::numbers::sqrt2 / 2.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(restriction::arcsine_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
}
