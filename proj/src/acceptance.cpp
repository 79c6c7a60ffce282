#include "nlab/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlab/cx.hpp"
#include "nlab/geom.hpp"
#include "nlab/nodal.hpp"
#include "nlab/norms.hpp"
#include "nlab/restrict.hpp"
#include "nlab/spectra.hpp"
#include "nlab/util.hpp"

namespace nlab::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.6g", v);
  return b;
}

// Mode lists shared between the identity and area criteria.
std::vector<spectra::ModeIndex> dong_torus_modes() {
  using spectra::Parity;
  return {spectra::torus_mode(1, 0, Parity::Sin), spectra::torus_mode(0, 1, Parity::Sin),
          spectra::torus_mode(1, 1, Parity::Cos), spectra::torus_mode(2, 1, Parity::Sin),
          spectra::torus_mode(1, 2, Parity::Cos), spectra::torus_mode(2, 2, Parity::Cos),
          spectra::torus_mode(2, 3, Parity::Sin), spectra::torus_mode(1, 3, Parity::Cos),
          spectra::torus_mode(4, 1, Parity::Sin), spectra::torus_mode(3, 4, Parity::Sin)};
}

std::vector<spectra::ModeIndex> dong_zonal_modes() {
  std::vector<spectra::ModeIndex> out;
  for (int deg = 1; deg <= 5; ++deg) out.push_back(spectra::zonal_mode(deg));
  return out;
}

// 1. Zero-set length of the plane-wave family k = M*(3,4) against the exact
// value 2|k|, stated as length/lambda = 1/pi.
CriterionResult c01() {
  CriterionResult r;
  r.name = "torus zero-set length / lambda = 1/pi, k = M*(3,4), M = 1..8, grid 512";
  r.expected = 0.0;
  r.tolerance = 0.01;
  geom::QuadGrid grid = geom::quadrature_grid(geom::Surface::Torus, 512);
  double worst = 0.0;
  for (int M = 1; M <= 8; ++M) {
    auto fn = spectra::eigenfn(spectra::torus_mode(3 * M, 4 * M, spectra::Parity::Sin));
    auto curves = nodal::extract_nodal(nodal::make_field(fn, grid));
    worst = std::max(worst, std::abs(curves.total_length / fn.lambda * kPi - 1.0));
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  r.note = "max relative deviation over the family";
  return r;
}

// 2. Two-route identity between the weighted area integral of |phi| and the
// weighted flux along the zero set, with weights 1 and the first harmonic.
CriterionResult c02() {
  CriterionResult r;
  r.name = "dong identity residual, weights {1, first harmonic}, 10 torus + 5 zonal modes";
  r.expected = 0.0;
  r.tolerance = 0.01;
  double worst = 0.0;
  auto run = [&worst](const spectra::ModeIndex& m) {
    auto fn = spectra::eigenfn(m);
    for (auto w : {norms::DongWeight::One, norms::DongWeight::FirstHarmonic}) {
      auto rep = norms::dong_identity(fn, w, 512);
      worst = std::max(worst, rep.rel_residual);
    }
  };
  for (const auto& m : dong_torus_modes()) run(m);
  for (const auto& m : dong_zonal_modes()) run(m);
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

// 3. Counting function: torus remainder growth exponent and exact sphere
// cumulative multiplicities.
CriterionResult c03() {
  CriterionResult r;
  r.name = "weyl remainder exponent <= 1.1 (torus); sphere counts == (K+1)^2";
  r.expected = 1.1;
  r.tolerance = 0.0;
  // enumerate a little past the last query point so every count is complete
  auto modes = spectra::enumerate_modes(geom::Surface::Torus, 410.0);
  std::vector<double> lambdas(120);
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    lambdas[i] = 10.0 * std::pow(40.0, double(i) / double(lambdas.size() - 1));
  auto pts = spectra::weyl_counts(modes, geom::Surface::Torus, lambdas);
  std::vector<double> fx, fy;
  for (const auto& p : pts)
    if (std::abs(p.remainder) > 1e-6) {
      fx.push_back(p.lambda);
      fy.push_back(std::abs(p.remainder));
    }
  const LineFit fit = fit_loglog(fx, fy);
  r.measured = fit.slope;

  auto smodes =
      spectra::enumerate_modes(geom::Surface::Sphere, std::sqrt(100.0 * 101.0) + 1e-9);
  bool sphere_exact = true;
  for (int K = 0; K <= 100; ++K) {
    const double lam = std::sqrt(double(K) * double(K + 1)) + 1e-9;
    std::size_t count = 0;
    for (const auto& m : smodes)
      if (m.lambda <= lam) ++count;
    if (count != std::size_t(K + 1) * std::size_t(K + 1)) sphere_exact = false;
  }
  r.pass = r.measured <= r.expected && sphere_exact;
  r.note = std::string("sphere cumulative counts exact: ") + (sphere_exact ? "yes" : "NO") +
           ", torus fit r2=" + fmt(fit.r2);
  return r;
}

// 4. Extremal L^p growth exponents of the two sphere families.
CriterionResult c04() {
  CriterionResult r;
  r.name = "L^p growth exponents: zonal sup 0.5, highest-weight L6 1/6, L1 -1/4";
  r.expected = 0.0;
  r.tolerance = 0.02;
  const std::vector<int> degs{16, 23, 32, 45, 64, 91, 128, 181, 256};
  const double inf = std::numeric_limits<double>::infinity();
  auto fsup = norms::scaling_fit(
      norms::family_norm_sweep(norms::Family::SphereZonal, inf, degs, 400));
  auto f6 = norms::scaling_fit(
      norms::family_norm_sweep(norms::Family::SphereHighestWeight, 6.0, degs, 800));
  auto f1 = norms::scaling_fit(
      norms::family_norm_sweep(norms::Family::SphereHighestWeight, 1.0, degs, 800));
  const double d_sup = std::abs(fsup.exponent - 0.5);
  const double d6 = std::abs(f6.exponent - 1.0 / 6.0);
  const double d1 = std::abs(f1.exponent - (-0.25));
  r.measured = std::max({d_sup, d6, d1});
  r.pass = r.measured <= r.tolerance;
  r.note = "exponents: sup " + fmt(fsup.exponent) + ", L6 " + fmt(f6.exponent) + ", L1 " +
           fmt(f1.exponent);
  return r;
}

// 5. Domain counts of the first disc Dirichlet modes: Courant bound and the
// asymptotic count ratio window.
CriterionResult c05() {
  CriterionResult r;
  r.name = "disc domain counts: <= index (first 50), ratio <= 0.70 for index 20..200";
  r.expected = 0.70;
  r.tolerance = 0.0;
  auto modes =
      spectra::enumerate_modes(geom::Surface::Disc, 32.0, spectra::BoundaryCondition::Dirichlet);
  if (modes.size() < 200) throw std::runtime_error("mode enumeration too short");
  geom::QuadGrid grid = geom::quadrature_grid(geom::Surface::Disc, 256);
  bool courant = true;
  int courant_break = 0;
  double max_ratio = 0.0;
  for (int k = 1; k <= 200; ++k) {
    auto fn = spectra::eigenfn(modes[std::size_t(k - 1)]);
    auto dom = nodal::count_domains(nodal::make_field(fn, grid));
    if (k <= 50 && dom.count > k) {
      courant = false;
      courant_break = k;
    }
    if (k >= 20) max_ratio = std::max(max_ratio, double(dom.count) / double(k));
  }
  r.measured = max_ratio;
  r.pass = courant && max_ratio <= r.expected;
  r.note = courant ? "count <= index holds for the first 50 modes"
                   : "count exceeds index at k=" + std::to_string(courant_break);
  return r;
}

// 6. Minimum domain area against the wavelength-scale disc bound, with the
// exact equality case. The bound's constant is the flat one, a theorem for
// the torus and disc modes of the suite; on the sphere it provably fails at
// low degree (the degree-1 zonal hemisphere has area 2pi, below the bound
// pi j01^2/2 by 31%), so the zonal margins are measured and reported only.
CriterionResult c06() {
  CriterionResult r;
  r.name = "per-domain area >= pi*j01^2/lambda^2 (margin >= -2%); disc (0,1) equality 1%";
  r.expected = 0.0;
  r.tolerance = 0.02;
  double min_margin = std::numeric_limits<double>::infinity();
  auto run = [&min_margin](const spectra::EigenFn& fn, const geom::QuadGrid& grid) {
    auto rep = nodal::faber_krahn_check(nodal::make_field(fn, grid));
    min_margin = std::min(min_margin, rep.min_margin_rel);
  };
  geom::QuadGrid tg = geom::quadrature_grid(geom::Surface::Torus, 512);
  geom::QuadGrid sg = geom::quadrature_grid(geom::Surface::Sphere, 512);
  geom::QuadGrid dg = geom::quadrature_grid(geom::Surface::Disc, 512);
  for (int M = 1; M <= 8; ++M)
    run(spectra::eigenfn(spectra::torus_mode(3 * M, 4 * M, spectra::Parity::Sin)), tg);
  for (const auto& m : dong_torus_modes()) run(spectra::eigenfn(m), tg);
  auto dmodes =
      spectra::enumerate_modes(geom::Surface::Disc, 14.0, spectra::BoundaryCondition::Dirichlet);
  if (dmodes.size() > 50) dmodes.resize(50);
  for (const auto& m : dmodes) run(spectra::eigenfn(m), dg);

  auto ground = spectra::eigenfn(
      spectra::disc_mode(spectra::BoundaryCondition::Dirichlet, 0, 1, spectra::Parity::Cos));
  auto grep = nodal::faber_krahn_check(nodal::make_field(ground, dg));
  const double equality = std::abs(grep.min_area / grep.bound - 1.0);

  double zonal_worst = 0.0;
  for (const auto& m : dong_zonal_modes()) {
    auto rep = nodal::faber_krahn_check(nodal::make_field(spectra::eigenfn(m), sg));
    zonal_worst = std::min(zonal_worst, rep.min_margin_rel);
  }

  r.measured = min_margin;
  r.pass = min_margin >= -r.tolerance && equality <= 0.01;
  r.note = "disc ground state |area/bound - 1| = " + fmt(equality) +
           "; flat constant on the sphere: zonal margins reach " + fmt(zonal_worst) +
           " (hemisphere case, the flat bound is not a theorem there; reported, not asserted)";
  return r;
}

// 7. Dual-route Poisson kernel agreement.
CriterionResult c07() {
  CriterionResult r;
  r.name = "poisson kernel closed form vs spectral sum (N<=200), t in [0.5,3]";
  r.expected = 0.0;
  r.tolerance = 1e-10;
  double sup = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0})
    for (int i = 0; i < 50; ++i) {
      const double rr = kPi * double(i) / 49.0;
      sup = std::max(sup, std::abs(spectra::poisson_kernel_closed(t, rr) -
                                   spectra::poisson_kernel_spectral(t, rr, 200)));
    }
  r.measured = sup;
  r.pass = sup <= r.tolerance;
  return r;
}

// 8. Gradient sup of the band-filtered kernel: amplitude lives on the wave
// front, so the exponent is 1 + (n-1)/2 = 3/2.
CriterionResult c08() {
  CriterionResult r;
  r.name = "filtered-kernel gradient sup exponent = 1.5, lambda in [20,200]";
  r.expected = 1.5;
  r.tolerance = 0.1;
  spectra::SpectralFilter filter(0.5);
  const std::vector<double> lams{20, 28, 40, 57, 80, 113, 160, 200};
  const std::size_t nr = 4096;
  std::vector<double> rr(nr), kk(nr), dk(nr);
  for (std::size_t i = 0; i < nr; ++i) rr[i] = kPi * (double(i) + 0.5) / double(nr);
  std::vector<norms::SweepPoint> pts;
  for (double lam : lams) {
    const int deg_max = int(lam) + 22;
    spectra::filtered_kernel_batch(filter, lam, deg_max, rr.data(), nr, kk.data(), dk.data());
    double sup = 0.0;
    for (double v : dk) sup = std::max(sup, std::abs(v));
    pts.push_back({lam, sup});
  }
  auto fit = norms::scaling_fit(pts);
  r.measured = fit.exponent;
  r.pass = std::abs(fit.exponent - r.expected) <= r.tolerance;
  r.note = "fit stderr " + fmt(fit.stderr_) + ", r2 " + fmt(fit.r2);
  return r;
}

// 9. Period sums over the equator: per-degree clusters against the explicit
// Legendre value, growth exponent against the closed-form oracle, and the
// recorded disagreement with a sqrt(lambda) rate.
CriterionResult c09() {
  CriterionResult r;
  r.name = "period-sum clusters == pi(2N+1)P_N(0)^2; growth exponent matches oracle";
  r.expected = 0.0;
  r.tolerance = 0.05;
  auto equator = geom::sphere_equator(2.0 * kPi);
  double max_mode_diff = 0.0, max_kernel_diff = 0.0;
  for (int deg = 0; deg <= 64; ++deg) {
    auto kc = restriction::kuznecov_cluster(deg, equator);
    max_mode_diff = std::max(max_mode_diff, std::abs(kc.measured - kc.closed_form));
    max_kernel_diff = std::max(max_kernel_diff, std::abs(kc.dual_route - kc.closed_form));
  }
  const int max_degree = 256, fit_from = 85;
  auto sum = restriction::kuznecov_sum(max_degree, equator, fit_from);
  std::vector<double> fx, fy;
  double running = 0.0;
  for (int deg = 0; deg <= max_degree; ++deg) {
    const double p0 = spectra::legendre_p(deg, 0.0);
    running += kPi * double(2 * deg + 1) * p0 * p0;
    if (deg >= fit_from) {
      fx.push_back(std::sqrt(double(deg) * double(deg + 1)));
      fy.push_back(running);
    }
  }
  const LineFit oracle = fit_loglog(fx, fy);
  r.measured = std::abs(sum.exponent - oracle.slope);
  r.pass = r.measured <= r.tolerance && max_mode_diff <= 1e-8 && max_kernel_diff <= 1e-8;
  r.note = "cluster diffs: modes " + fmt(max_mode_diff) + ", kernel " + fmt(max_kernel_diff) +
           "; exponents " + fmt(sum.exponent) + " vs oracle " + fmt(oracle.slope) +
           "; a sqrt-lambda rate (exponent 0.5) disagrees with the measured near-linear " +
           "growth: reported, not asserted";
  return r;
}

// 10. Almost all basis elements have a small equator period: the only
// non-negligible periods come from one element per even degree.
CriterionResult c10() {
  CriterionResult r;
  r.name = "fraction of modes with |equator period| > lambda^{-1/4} sqrt(log lambda) <= 5%";
  r.expected = 0.0;
  r.tolerance = 0.05;
  const double sqrt2 = std::numbers::sqrt2;
  std::size_t total = 0, exceed = 0;
  for (int deg = 50; deg <= 200; ++deg) {
    const double lam = std::sqrt(double(deg) * double(deg + 1));
    const double thr = std::pow(lam, -0.25) * std::sqrt(std::log(lam));
    const std::size_t K = std::size_t(std::max(256, 4 * (deg + 1)));
    const double step = 2.0 * kPi / double(K);
    for (int m = 0; m <= deg; ++m) {
      const double pbar = spectra::assoc_legendre_norm(deg, m, 0.0, 1.0);
      if (m == 0) {
        ++total;
        if (std::abs(pbar) * 2.0 * kPi > thr) ++exceed;
        continue;
      }
      // phi = pi/2 along the whole circle, so only the angular factor varies
      double sc = 0.0, ss = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        const double a = double(m) * step * double(j);
        sc += std::cos(a);
        ss += std::sin(a);
      }
      total += 2;
      if (std::abs(pbar) * sqrt2 * std::abs(sc) * step > thr) ++exceed;
      if (std::abs(pbar) * sqrt2 * std::abs(ss) * step > thr) ++exceed;
    }
  }
  r.measured = double(exceed) / double(total);
  r.pass = r.measured <= r.tolerance;
  r.note = std::to_string(exceed) + " of " + std::to_string(total) +
           " elements exceed the threshold (the even-degree invariant elements)";
  return r;
}

// 11. Holomorphic-extension growth: exact torus ray rate, empirical sphere
// envelope.
CriterionResult c11() {
  CriterionResult r;
  r.name = "complex growth: torus ray rate 0.2 at M=64; sphere u <= 2 sqrt(rho) + 8 log(lambda)/lambda";
  r.expected = 0.2;
  r.tolerance = 0.01;
  auto fn = spectra::eigenfn(spectra::torus_mode(64, 0, spectra::Parity::Sin));
  auto ray = geom::torus_segment({0.3, 0.7}, {1.0, 0.0}, 1.0);
  double mean_u = 0.0;
  const int nt = 16;
  for (int i = 0; i < nt; ++i) {
    const std::complex<double> w((double(i) + 0.5) / double(nt), 0.1);
    mean_u += cx::growth_rate(fn, geom::complexified_geodesic_point(ray, w));
  }
  mean_u /= double(nt);

  std::mt19937_64 rng(0x5eedull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool env_ok = true;
  double worst_coeff = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const int deg = 1 + int(rng() % 128);
    const int ord = int(rng() % std::uint64_t(2 * deg + 1)) - deg;
    auto sfn = spectra::eigenfn(spectra::sphere_mode(deg, ord));
    const geom::Point base{std::acos(2.0 * unit(rng) - 1.0), 2.0 * kPi * unit(rng)};
    auto circle = geom::sphere_great_circle(base, 2.0 * kPi * unit(rng), 2.0 * kPi);
    const std::complex<double> w(2.0 * kPi * unit(rng), 0.8 * unit(rng) - 0.4);
    auto z = geom::complexified_geodesic_point(circle, w);
    const double u = cx::growth_rate(sfn, z);
    const double srho = cx::grauert_sqrt_rho(z);
    const double lam = sfn.lambda;
    if (u > 2.0 * srho + 8.0 * std::log(lam) / lam) env_ok = false;
    worst_coeff = std::max(worst_coeff, (u - 2.0 * srho) * lam / std::log(lam));
  }
  r.measured = mean_u;
  r.pass = std::abs(mean_u - r.expected) <= r.tolerance && env_ok;
  r.note = "torus correction (2/lambda)log(sqrt2/2) = " + fmt(2.0 / fn.lambda * std::log(0.5 * std::numbers::sqrt2)) +
           "; sphere envelope coefficient max " + fmt(worst_coeff) + " (bound 8) on 100 tube points";
  return r;
}

// 12. Argument-principle zero counts against lattice closed forms, realness
// of located zeros, and the zero density along a long window.
CriterionResult c12() {
  CriterionResult r;
  r.name = "zero counts == closed form on 50 random cases; |Im| <= 1e-8; density within 2%";
  r.expected = 0.0;
  r.tolerance = 1e-8;
  std::mt19937_64 rng(0xc0ffeeull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool counts_ok = true;
  double max_imag = 0.0, max_pos_err = 0.0;
  int done = 0;
  while (done < 50) {
    const int k1 = 1 + int(rng() % 5);
    const int k2 = int(rng() % 11) - 5;
    const bool sinp = (rng() & 1) != 0;
    auto fn = spectra::eigenfn(
        spectra::torus_mode(k1, k2, sinp ? spectra::Parity::Sin : spectra::Parity::Cos));
    const geom::Point base{unit(rng), unit(rng)};
    const double ang = 2.0 * kPi * unit(rng);
    const std::array<double, 2> dir{std::cos(ang), std::sin(ang)};
    const double mu = k1 * dir[0] + k2 * dir[1];
    if (std::abs(mu) < 0.25) continue;
    const double t0 = 0.5 * unit(rng);
    const double tlen = 0.5 + 1.5 * unit(rng);
    const double t1 = t0 + tlen;
    const double tau1 = 0.05 + 0.3 * unit(rng);
    const double tau0 = -(0.05 + 0.3 * unit(rng));
    // real zeros of the restricted wave: phase c + mu t on the half-integer
    // lattice (shifted by 1/4 for the cosine branch)
    const double c = k1 * base.a + k2 * base.b;
    const double offset = sinp ? 0.0 : 0.25;
    std::vector<double> zeros;
    {
      const double slo = c + mu * (t0 - 0.2), shi = c + mu * (t1 + 0.2);
      const double smin = std::min(slo, shi), smax = std::max(slo, shi);
      for (long n = long(std::ceil(2.0 * (smin - offset))); double(n) / 2.0 + offset <= smax; ++n)
        zeros.push_back((double(n) / 2.0 + offset - c) / mu);
    }
    const double clear = 0.02 * tlen;
    bool near_edge = false;
    int expected_count = 0;
    for (double z : zeros) {
      if (std::abs(z - t0) < clear || std::abs(z - t1) < clear) near_edge = true;
      if (z > t0 && z < t1) ++expected_count;
    }
    if (near_edge) continue;
    auto g = geom::torus_segment(base, dir, std::max(1.0, t1));
    cx::Rect rect{t0, t1, tau0, tau1};
    auto zc = cx::count_zeros_rect(fn, g, rect);
    if (zc.count != expected_count) counts_ok = false;
    auto zs = cx::zero_locations(fn, g, rect);
    for (const auto& z : zs.zeros) {
      max_imag = std::max(max_imag, std::abs(z.imag()));
      double best = std::numeric_limits<double>::infinity();
      for (double t : zeros) best = std::min(best, std::abs(z.real() - t));
      max_pos_err = std::max(max_pos_err, best);
    }
    ++done;
  }

  auto rfn = spectra::eigenfn(spectra::torus_mode(64, 0, spectra::Parity::Sin));
  auto rg = geom::torus_segment({0.37, 0.61}, {1.0, 0.0}, 2.0);
  const double dens = cx::measured_real_zero_density(rfn, rg, 0.2);
  const double pred = cx::predicted_intersection_density(rfn, rg);
  const double dens_rel = std::abs(dens - pred) / pred;

  r.measured = max_imag;
  r.pass = counts_ok && max_imag <= r.tolerance && dens_rel <= 0.02;
  r.note = std::string("counts ") + (counts_ok ? "all equal" : "MISMATCH") + "; max t error " +
           fmt(max_pos_err) + "; density " + fmt(dens) + " vs " + fmt(pred) + " (rel " +
           fmt(dens_rel) + ")";
  return r;
}

// 13. Boundary sign changes of Neumann disc modes equal twice the angular
// order, which never exceeds 2 lambda.
CriterionResult c13() {
  CriterionResult r;
  r.name = "neumann boundary sign changes == 2m and <= 2 lambda, all modes lambda <= 60";
  r.expected = 1.0;
  r.tolerance = 0.0;
  auto modes =
      spectra::enumerate_modes(geom::Surface::Disc, 60.0, spectra::BoundaryCondition::Neumann);
  bool all_equal = true;
  double max_ratio = 0.0;
  for (const auto& m : modes) {
    const auto& dm = std::get<spectra::DiscMode>(m.id);
    auto rest = restriction::restrict_to_boundary(spectra::eigenfn(m));
    auto sc = restriction::sign_changes(rest);
    if (sc.count != 2 * dm.ang) all_equal = false;
    if (m.lambda > 0.0) max_ratio = std::max(max_ratio, double(sc.count) / (2.0 * m.lambda));
  }
  r.measured = max_ratio;
  r.pass = all_equal && max_ratio <= 1.0;
  r.note = std::to_string(modes.size()) + " modes checked; counts " +
           (all_equal ? "all equal 2m" : "MISMATCH");
  return r;
}

// 14. Equator Fourier-weight profile against the arcsine law.
CriterionResult c14() {
  CriterionResult r;
  r.name = "equator mode-weight distribution within 0.05 of the arcsine law, N = 256";
  r.expected = 0.0;
  r.tolerance = 0.05;
  auto q = restriction::qer_mode_profile(256);
  r.measured = q.cdf_distance;
  const double mass = double(2 * 256 + 1) / (4.0 * kPi);
  r.pass = q.cdf_distance <= r.tolerance;
  r.note = "total weight " + fmt(q.total) + " vs (2N+1)/4pi = " + fmt(mass);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all() {
  struct Entry {
    int id;
    CriterionResult (*fn)();
  };
  const Entry entries[] = {{1, c01}, {2, c02},  {3, c03},  {4, c04},  {5, c05},
                           {6, c06}, {7, c07},  {8, c08},  {9, c09},  {10, c10},
                           {11, c11}, {12, c12}, {13, c13}, {14, c14}};
  std::vector<CriterionResult> out;
  for (const auto& e : entries) {
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.note = std::string("exception: ") + ex.what();
      if (r.name.empty()) r.name = "criterion aborted";
    }
    r.id = e.id;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof(head), "criterion %02d %s  measured=%.8g expected=%.8g tol=%.3g  ",
                r.id, r.pass ? "PASS" : "FAIL", r.measured, r.expected, r.tolerance);
  std::string line = head;
  line += r.name;
  if (!r.note.empty()) {
    line += "  [";
    line += r.note;
    line += "]";
  }
  return line;
}

}  // namespace nlab::acceptance
