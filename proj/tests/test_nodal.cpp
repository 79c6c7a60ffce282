// Zero sets on grids: curve extraction, sign domains, the embedded-graph
// combinatorics of the nodal set, small-ball sign changes, and local
// vanishing structure at zeros.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlab/geom.hpp"
#include "nlab/nodal.hpp"
#include "nlab/spectra.hpp"

using namespace nlab;
using geom::Surface;
using spectra::BoundaryCondition;
using spectra::Parity;

namespace {
constexpr double kPi = std::numbers::pi;

spectra::EigenFn torus_fn(int k1, int k2, Parity p) {
  return spectra::eigenfn(spectra::torus_mode(k1, k2, p));
}
}  // namespace

TEST_CASE("make_field nudges exact zeros off the sign boundary") {
  auto grid = geom::quadrature_grid(Surface::Torus, 8);
  std::vector<double> values(grid.size(), -2.0);
  values[0] = 0.0;
  values[5] = 2.0;
  auto f = nodal::make_field_values(grid, values, 1.0);
  CHECK(f.max_abs == 2.0);
  CHECK(f.value[0] == doctest::Approx(2e-14).epsilon(1e-12));
  CHECK(f.value[0] > 0.0);
  CHECK(f.value[5] == 2.0);
  CHECK_THROWS_AS((void)nodal::make_field_values(grid, std::vector<double>(3, 1.0), 1.0),
                  std::invalid_argument);

  // sup of |phi| lands on a grid node for this wave, so max_abs is exact
  auto pw = nodal::make_field(torus_fn(1, 0, Parity::Cos),
                              geom::quadrature_grid(Surface::Torus, 64));
  CHECK(pw.max_abs == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  CHECK(pw.lambda == doctest::Approx(2.0 * kPi));
}

TEST_CASE("extract_nodal traces the two zero circles of a plane wave") {
  // sqrt2 cos(2 pi x1) vanishes on the vertical circles x1 = 1/4 and 3/4
  auto f = nodal::make_field(torus_fn(1, 0, Parity::Cos),
                             geom::quadrature_grid(Surface::Torus, 64));
  auto cs = nodal::extract_nodal(f);
  REQUIRE(cs.curves.size() == 2);
  for (const auto& c : cs.curves) {
    CHECK(c.closed);
    CHECK(c.length == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(cs.total_length == doctest::Approx(2.0).epsilon(1e-6));

  // line integral of x1 picks up the two circle positions 1/4 + 3/4
  double m1 = nodal::integrate_over_curves(Surface::Torus, cs,
                                           [](geom::Point p) { return p.a; });
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-9));

  // first-degree zonal mode vanishes exactly on the equator
  auto z = nodal::make_field(spectra::eigenfn(spectra::zonal_mode(1)),
                             geom::quadrature_grid(Surface::Sphere, 96));
  auto zc = nodal::extract_nodal(z);
  REQUIRE(zc.curves.size() == 1);
  CHECK(zc.curves[0].closed);
  CHECK(zc.total_length == doctest::Approx(2.0 * kPi).epsilon(1e-3));
}

TEST_CASE("extract_level pulls a non-zero level of the same wave") {
  // sqrt2 cos(2 pi x1) = 0.6 on two circles, again of total length 2
  auto f = nodal::make_field(torus_fn(1, 0, Parity::Cos),
                             geom::quadrature_grid(Surface::Torus, 64));
  auto cs = nodal::extract_level(f, 0.6);
  REQUIRE(cs.curves.size() == 2);
  CHECK(cs.total_length == doctest::Approx(2.0).epsilon(1e-5));
  // the two circles sit symmetrically around x1 = 0: acos(0.6/sqrt2)/(2 pi)
  double x = std::acos(0.6 / std::numbers::sqrt2) / (2.0 * kPi);
  double m1 = nodal::integrate_over_curves(Surface::Torus, cs,
                                           [](geom::Point p) { return p.a; });
  CHECK(m1 == doctest::Approx(x + (1.0 - x)).epsilon(1e-6));
}

TEST_CASE("count_domains splits the product wave into its four cells") {
  // 2 sin(2 pi x1 + 0.9) sin(2 pi x2 + 0.7), one eigenspace combination;
  // the phases keep the straight nodal lines off the grid rows and columns
  const double d1 = 0.2, s1 = 1.6;
  auto fn = spectra::combine(
      {{spectra::torus_mode(1, -1, Parity::Cos), std::cos(d1) / std::numbers::sqrt2},
       {spectra::torus_mode(1, -1, Parity::Sin), -std::sin(d1) / std::numbers::sqrt2},
       {spectra::torus_mode(1, 1, Parity::Cos), -std::cos(s1) / std::numbers::sqrt2},
       {spectra::torus_mode(1, 1, Parity::Sin), std::sin(s1) / std::numbers::sqrt2}});
  auto f = nodal::make_field(fn, geom::quadrature_grid(Surface::Torus, 96));
  auto d = nodal::count_domains(f);
  REQUIRE(d.count == 4);
  CHECK(d.label.size() == f.grid.size());
  int pos = 0, neg = 0;
  double total = 0.0;
  for (int i = 0; i < d.count; ++i) {
    // node-counted area resolves the cell boundary to one grid spacing
    CHECK(d.area[i] == doctest::Approx(0.25).epsilon(0.05));
    total += d.area[i];
    (d.sign[i] > 0 ? pos : neg) += 1;
  }
  CHECK(pos == 2);
  CHECK(neg == 2);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("count_domains finds the three bands of the second zonal mode") {
  // P2(cos phi) changes sign at cos phi = +-1/sqrt3
  auto f = nodal::make_field(spectra::eigenfn(spectra::zonal_mode(2)),
                             geom::quadrature_grid(Surface::Sphere, 128));
  auto d = nodal::count_domains(f);
  REQUIRE(d.count == 3);
  double cap = 2.0 * kPi * (1.0 - 1.0 / std::sqrt(3.0));
  int pos = 0;
  double total = 0.0;
  for (int i = 0; i < d.count; ++i) {
    total += d.area[i];
    if (d.sign[i] > 0) {
      ++pos;
      CHECK(d.area[i] == doctest::Approx(cap).epsilon(0.03));
    } else {
      CHECK(d.area[i] == doctest::Approx(4.0 * kPi - 2.0 * cap).epsilon(0.03));
    }
  }
  CHECK(pos == 2);
  CHECK(total == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("count_domains halves the disc for the first angular mode") {
  auto fn = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 1, 1, Parity::Cos));
  auto f = nodal::make_field(fn, geom::quadrature_grid(Surface::Disc, 128));
  auto d = nodal::count_domains(f);
  REQUIRE(d.count == 2);
  CHECK(d.area[0] == doctest::Approx(kPi / 2.0).epsilon(0.02));
  CHECK(d.area[1] == doctest::Approx(kPi / 2.0).epsilon(0.02));
  CHECK(d.sign[0] * d.sign[1] == -1);
}

TEST_CASE("faber_krahn margin: two half-area bands of a torus wave clear the bound") {
  // primitive k: the two sign regions are connected bands of area 1/2 each
  auto f = nodal::make_field(torus_fn(3, 4, Parity::Cos),
                             geom::quadrature_grid(Surface::Torus, 128));
  auto r = nodal::faber_krahn_check(f);
  const double j01 = 2.404825557695773;
  CHECK(r.domains == 2);
  CHECK(r.bound == doctest::Approx(kPi * j01 * j01 / (100.0 * kPi * kPi)).epsilon(1e-12));
  CHECK(r.min_area == doctest::Approx(0.5).epsilon(0.01));
  CHECK(r.min_margin_rel == doctest::Approx(0.5 / r.bound - 1.0).epsilon(0.02));
  CHECK(r.min_margin_rel > 0.0);
}

TEST_CASE("faber_krahn equality: the inner disc of the first radial overtone") {
  // the inner nodal domain is the disc r < j01/j02, whose area IS the bound
  auto fn = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 2, Parity::Cos));
  auto f = nodal::make_field(fn, geom::quadrature_grid(Surface::Disc, 128));
  auto r = nodal::faber_krahn_check(f);
  CHECK(r.domains == 2);
  CHECK(r.min_area == doctest::Approx(r.bound).epsilon(0.05));
  CHECK(r.min_margin_rel >= -0.05);
  CHECK(r.min_margin_rel <= 0.05);
}

// ---- embedded graph of the zero set against a fixed closed geodesic ----
//
// Seven hand-checked configurations. v, e, f, m are vertices, edges, faces
// and components of the graph cut out by the zero set (odd case) or the zero
// set together with gamma (even case); euler_lhs = v - e + f - m >= 1 - 2g.

TEST_CASE("graph of the third zonal mode over the equator (odd, three free circles)") {
  auto g = nodal::euler_graph(spectra::eigenfn(spectra::zonal_mode(3)),
                              geom::sphere_equator(2.0 * kPi), 200);
  CHECK(g.odd);
  CHECK(g.v == 3);
  CHECK(g.e == 3);
  CHECK(g.f == 4);
  CHECK(g.m == 3);
  CHECK(g.genus == 0);
  CHECK(g.n_gamma == 0);
  CHECK(g.euler_lhs == 1);
  CHECK(g.formula_bound == 2);
  CHECK(g.face_bound == 4);
}

TEST_CASE("graph of the degree-4 sine sector mode over a meridian (odd, polar joints)") {
  // sin(4 theta) vanishes on the gamma meridian; both poles are order-4 zeros
  auto gamma = geom::sphere_great_circle({kPi / 2, 0.0}, 0.0, 2.0 * kPi);
  auto g = nodal::euler_graph(spectra::eigenfn(spectra::sphere_mode(4, -4)), gamma, 256);
  CHECK(g.odd);
  CHECK(g.v == 2);
  CHECK(g.e == 8);
  CHECK(g.f == 8);
  CHECK(g.m == 1);
  CHECK(g.n_gamma == 2);
  CHECK(g.euler_lhs == 1);
  CHECK(g.formula_bound == 4);
  CHECK(g.face_bound == 8);
}

TEST_CASE("graph of the degree-4 cosine sector mode over a meridian (even, cut lunes)") {
  // zero meridians at pi/8 + j pi/4 avoid gamma except at the poles
  auto gamma = geom::sphere_great_circle({kPi / 2, 0.0}, 0.0, 2.0 * kPi);
  auto g = nodal::euler_graph(spectra::eigenfn(spectra::sphere_mode(4, 4)), gamma, 256);
  CHECK(!g.odd);
  CHECK(g.v == 2);
  CHECK(g.e == 10);
  CHECK(g.f == 10);
  CHECK(g.m == 1);
  CHECK(g.n_gamma == 2);
  CHECK(g.euler_lhs == 1);
  CHECK(g.formula_bound == 2);
  CHECK(g.face_bound == 5);
}

TEST_CASE("graph of the second zonal mode over the equator (even, disjoint gamma)") {
  auto g = nodal::euler_graph(spectra::eigenfn(spectra::zonal_mode(2)),
                              geom::sphere_equator(2.0 * kPi), 200);
  CHECK(!g.odd);
  CHECK(g.v == 3);
  CHECK(g.e == 3);
  CHECK(g.f == 4);
  CHECK(g.m == 3);
  CHECK(g.n_gamma == 0);
  CHECK(g.euler_lhs == 1);
  CHECK(g.formula_bound == 1);
  CHECK(g.face_bound == 2);
}

TEST_CASE("graph of a torus wave odd across its own zero circle") {
  // sin(2 pi x2) is odd across gamma = {x2 = 0}, which is one of its circles
  auto gamma = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto g = nodal::euler_graph(torus_fn(0, 1, Parity::Sin), gamma, 128);
  CHECK(g.odd);
  CHECK(g.genus == 1);
  CHECK(g.v == 2);
  CHECK(g.e == 2);
  CHECK(g.f == 2);
  CHECK(g.m == 2);
  CHECK(g.n_gamma == 0);
  CHECK(g.euler_lhs == 0);   // >= 1 - 2g = -1
  CHECK(g.formula_bound == 0);
  CHECK(g.face_bound == 2);
}

TEST_CASE("graph of a torus wave even across a disjoint geodesic") {
  // cos(2 pi x2) vanishes on x2 = 1/4, 3/4; gamma = {x2 = 0} stays clear
  auto gamma = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto g = nodal::euler_graph(torus_fn(0, 1, Parity::Cos), gamma, 128);
  CHECK(!g.odd);
  CHECK(g.v == 3);
  CHECK(g.e == 3);
  CHECK(g.f == 3);
  CHECK(g.m == 3);
  CHECK(g.n_gamma == 0);
  CHECK(g.euler_lhs == 0);
  CHECK(g.formula_bound == 0);
  CHECK(g.face_bound == 2);
}

TEST_CASE("graph of a torus wave crossing the geodesic twice (equality case)") {
  // sin(2 pi x1) is even across {x2 = 0} and its two circles cross gamma once each
  auto gamma = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  auto g = nodal::euler_graph(torus_fn(1, 0, Parity::Sin), gamma, 128);
  CHECK(!g.odd);
  CHECK(g.v == 2);
  CHECK(g.e == 4);
  CHECK(g.f == 2);
  CHECK(g.m == 1);
  CHECK(g.n_gamma == 2);
  CHECK(g.euler_lhs == -1);  // attains 1 - 2g exactly
  CHECK(g.formula_bound == 1);
  CHECK(g.face_bound == 1);
}

TEST_CASE("euler_graph rejects unusable inputs") {
  auto gamma = geom::torus_closed_geodesic({0.0, 0.0}, 1, 0);
  // diagonal wave: neither even nor odd across a horizontal geodesic
  CHECK_THROWS_AS((void)nodal::euler_graph(torus_fn(1, 1, Parity::Sin), gamma, 128),
                  std::invalid_argument);
  auto open = geom::torus_segment({0.0, 0.0}, {1.0, 0.0}, 0.5);
  CHECK_THROWS_AS((void)nodal::euler_graph(torus_fn(0, 1, Parity::Sin), open, 128),
                  std::invalid_argument);
  auto disc = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 1, 1, Parity::Cos));
  CHECK_THROWS_AS((void)nodal::euler_graph(disc, gamma, 128), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)nodal::euler_graph(spectra::eigenfn(spectra::torus_constant()), gamma, 128),
      std::invalid_argument);
}

TEST_CASE("small-ball radius of a plane wave calibrates to a quarter period") {
  // zero circles at x1 = 1/4, 3/4: worst centres need r close to 1/4,
  // so a = lambda r approaches pi/2
  auto fn = torus_fn(1, 0, Parity::Cos);
  double a = nodal::calibrate_small_ball(fn, 200, 5);
  CHECK(a >= 0.9 * kPi / 2.0);
  CHECK(a <= 1.001 * kPi / 2.0);

  auto ok = nodal::small_ball_check(fn, 1.001 * a, 200, 5);
  CHECK(ok.pass);
  CHECK(ok.trials == 200);
  CHECK(ok.worst_need <= 1.001 * a * (1.0 + 1e-12));

  auto bad = nodal::small_ball_check(fn, 0.98 * a, 200, 5);
  CHECK(!bad.pass);
}

TEST_CASE("small-ball constant of the second zonal mode stays below the polar gap") {
  // worst possible centre is a pole, distance acos(1/sqrt3) from the zero set
  auto fn = spectra::eigenfn(spectra::zonal_mode(2));
  double a = nodal::calibrate_small_ball(fn, 200, 9);
  CHECK(a <= 1.001 * std::sqrt(6.0) * std::acos(1.0 / std::sqrt(3.0)));
  CHECK(a >= 1.5);
  CHECK(nodal::small_ball_check(fn, 1.01 * a, 200, 9).pass);

  auto disc = spectra::eigenfn(spectra::disc_mode(BoundaryCondition::Dirichlet, 0, 1, Parity::Cos));
  CHECK_THROWS_AS((void)nodal::small_ball_check(disc, 1.0, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)nodal::calibrate_small_ball(disc, 8, 1), std::invalid_argument);
}

TEST_CASE("leading term at a regular zero is the gradient line") {
  auto fit = nodal::leading_polynomial_fit(torus_fn(1, 0, Parity::Cos), {0.25, 0.37});
  CHECK(fit.order == 1);
  REQUIRE(fit.coeff.size() == 2);
  // |grad| = sqrt2 * 2 pi at the zero; the ring stencil at radius
  // 0.25 / lambda truncates the cubic term, so ~5e-4 relative error
  CHECK(std::hypot(fit.coeff[0], fit.coeff[1]) ==
        doctest::Approx(2.0 * std::numbers::sqrt2 * kPi).epsilon(2e-3));
  CHECK(std::abs(fit.coeff[1]) <= 1e-6);
  CHECK(fit.laplacian_residual_rel == 0.0);

  CHECK_THROWS_AS((void)nodal::leading_polynomial_fit(torus_fn(1, 0, Parity::Cos), {0.1, 0.2}),
                  std::invalid_argument);
}

TEST_CASE("leading term at an order-2 zero is the harmonic saddle x^2 - y^2") {
  // cos(2 pi x2) - cos(2 pi x1) (times sqrt2) has a double zero at the origin
  auto fn = spectra::combine({{spectra::torus_mode(0, 1, Parity::Cos), 1.0},
                              {spectra::torus_mode(1, 0, Parity::Cos), -1.0}});
  auto fit = nodal::leading_polynomial_fit(fn, {0.0, 0.0});
  CHECK(fit.order == 2);
  REQUIRE(fit.coeff.size() == 3);
  CHECK(fit.coeff[0] == doctest::Approx(2.0 * std::numbers::sqrt2 * kPi * kPi).epsilon(2e-3));
  CHECK(fit.coeff[2] / fit.coeff[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(fit.coeff[1]) <= 1e-5 * std::abs(fit.coeff[0]));
  CHECK(fit.laplacian_residual_rel <= 1e-6);
}

TEST_CASE("leading term of Y_{2,1} at the pole carries the classical slope") {
  auto fit = nodal::leading_polynomial_fit(spectra::eigenfn(spectra::sphere_mode(2, 1)),
                                           {0.0, 0.0});
  CHECK(fit.order == 1);
  CHECK(std::hypot(fit.coeff[0], fit.coeff[1]) ==
        doctest::Approx(std::sqrt(15.0 / (4.0 * kPi))).epsilon(5e-3));
}

TEST_CASE("leading term of the degree-4 sector mode at the pole is Re (x+iy)^4") {
  auto fit = nodal::leading_polynomial_fit(spectra::eigenfn(spectra::sphere_mode(4, 4)),
                                           {0.0, 0.0});
  CHECK(fit.order == 4);
  REQUIRE(fit.coeff.size() == 5);
  CHECK(fit.coeff[2] / fit.coeff[0] == doctest::Approx(-6.0).epsilon(1e-3));
  CHECK(fit.coeff[4] / fit.coeff[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(fit.coeff[1]) <= 1e-3 * std::abs(fit.coeff[0]));
  CHECK(std::abs(fit.coeff[3]) <= 1e-3 * std::abs(fit.coeff[0]));
  // sqrt2 * pbar_4^4 seed: coefficient of sin^4 phi is (3/16) sqrt(35/2pi) sqrt2
  CHECK(fit.coeff[0] ==
        doctest::Approx(std::numbers::sqrt2 * (3.0 / 16.0) * std::sqrt(35.0 / (2.0 * kPi)))
            .epsilon(1e-2));
  CHECK(fit.laplacian_residual_rel <= 1e-3);
}
