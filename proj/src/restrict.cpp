#include "nlab/restrict.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlab/simd.hpp"
#include "nlab/util.hpp"

namespace nlab::restriction {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// At least 64 samples and at least 8 per wavelength 2 pi / lambda.
std::size_t sample_count(double lambda, double length) {
  const double need = std::max(64.0, 8.0 * lambda * length / (2.0 * kPi));
  return next_pow2(std::size_t(std::ceil(need)));
}

// In-place radix-2 DFT, x[k] <- sum_j x[j] exp(-2 pi i j k / n). Twiddles come
// from polar() per butterfly, so no error accumulates across a stage.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / double(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> w = std::polar(1.0, ang * double(j));
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

void require_unit_great_circle(const geom::GeodesicSegment& g) {
  if (g.surface != geom::Surface::Sphere || !g.closed)
    throw std::invalid_argument("period sums need a closed sphere great circle");
  if (std::abs(g.length - 2.0 * kPi) > 1e-9 * 2.0 * kPi)
    throw std::invalid_argument("period sums need a single-loop circle, length 2 pi");
}

// Kernel route for one eigenspace: the double integral of the projection
// kernel over the circle collapses to a single integral because the kernel
// depends only on distance and the circle is homogeneous. The integrand is a
// trig polynomial of degree <= deg, so the periodic trapezoid rule below is
// exact up to roundoff.
double kernel_route(int deg, const geom::GeodesicSegment& circle) {
  const std::size_t n = std::size_t(std::max(256, 4 * (deg + 1)));
  const double step = circle.length / double(n);
  const geom::Point base = geom::geodesic_point(circle, 0.0);
  std::vector<double> cosd(n), pn(n);
  for (std::size_t j = 0; j < n; ++j) {
    const geom::Point p = geom::geodesic_point(circle, step * double(j));
    cosd[j] = std::cos(geom::distance(geom::Surface::Sphere, base, p));
  }
  simd::legendre_batch(deg, cosd.data(), n, pn.data(), nullptr);
  const double inner = simd::sum(pn.data(), n) * step;
  return circle.length * inner * double(2 * deg + 1) / (4.0 * kPi);
}

}  // namespace

RestrictedFn restrict_to_geodesic(const spectra::EigenFn& fn, const geom::GeodesicSegment& g) {
  if (fn.surface != g.surface) throw std::invalid_argument("restriction surface mismatch");
  if (g.surface == geom::Surface::Disc)
    throw std::invalid_argument("disc has no geodesic restrictions; use the boundary");
  if (!(g.length > 0.0)) throw std::invalid_argument("restriction needs positive length");
  RestrictedFn r;
  r.curve = g;
  r.length = g.length;
  r.count = sample_count(fn.lambda, g.length);
  r.values.resize(r.count);
  const double step = g.length / double(r.count);
  for (std::size_t j = 0; j < r.count; ++j)
    r.values[j] = spectra::eval(fn, geom::geodesic_point(g, step * double(j)));
  return r;
}

RestrictedFn restrict_to_boundary(const spectra::EigenFn& fn) {
  if (fn.surface != geom::Surface::Disc)
    throw std::invalid_argument("boundary restriction is a disc operation");
  RestrictedFn r;
  r.curve.surface = geom::Surface::Disc;
  r.curve.base = {1.0, 0.0};
  r.curve.dir = {0.0, 1.0};
  r.curve.length = 2.0 * kPi;
  r.curve.closed = true;
  r.length = r.curve.length;
  r.count = sample_count(fn.lambda, r.length);
  r.values.resize(r.count);
  const double step = 2.0 * kPi / double(r.count);
  for (std::size_t j = 0; j < r.count; ++j)
    r.values[j] = spectra::eval(fn, {1.0, step * double(j)});
  return r;
}

FourierData orbital_fourier(const RestrictedFn& r) {
  if (!r.curve.closed) throw std::invalid_argument("orbital Fourier data needs a closed curve");
  FourierData out;
  out.coeff.assign(r.values.begin(), r.values.end());
  fft(out.coeff);
  double time_sq = 0.0;
  for (double v : r.values) time_sq += v * v;
  time_sq /= double(r.count);
  for (auto& c : out.coeff) c /= double(r.count);
  double freq_sq = 0.0;
  for (const auto& c : out.coeff) freq_sq += std::norm(c);
  out.parseval_rel = std::abs(time_sq - freq_sq) / std::max(time_sq, 1e-300);
  return out;
}

SignChangeReport sign_changes(const RestrictedFn& r, double tol_rel) {
  SignChangeReport rep;
  rep.max_abs = simd::max_abs(r.values.data(), r.values.size());
  rep.min_abs = rep.max_abs;
  for (double v : r.values) rep.min_abs = std::min(rep.min_abs, std::abs(v));
  rep.near_zero_flag = rep.max_abs == 0.0 || rep.min_abs <= tol_rel * rep.max_abs;
  int first = 0, prev = 0, flips = 0;
  for (double v : r.values) {
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (prev == 0)
      first = s;
    else if (s != prev)
      ++flips;
    prev = s;
  }
  if (r.curve.closed && prev != 0 && prev != first) ++flips;
  rep.count = flips;
  return rep;
}

KuznecovCluster kuznecov_cluster(int degree, const geom::GeodesicSegment& circle) {
  require_unit_great_circle(circle);
  if (degree < 0) throw std::invalid_argument("negative degree");
  KuznecovCluster kc;
  kc.degree = degree;
  kc.lambda = std::sqrt(double(degree) * double(degree + 1));

  // Mode route: period integral of every real basis mode, summed in squares.
  // The restriction of a degree-N mode is a trig polynomial of degree <= N,
  // so the trapezoid count below integrates it exactly.
  const std::size_t n = next_pow2(std::size_t(std::max(256, 4 * (degree + 1))));
  const double step = circle.length / double(n);
  std::vector<double> cphi(n), sphi(n), theta(n), pbar(n);
  for (std::size_t j = 0; j < n; ++j) {
    const geom::Point p = geom::geodesic_point(circle, step * double(j));
    cphi[j] = std::cos(p.a);
    sphi[j] = std::max(std::sin(p.a), 1e-300);  // poles underflow to a true zero
    theta[j] = p.b;
  }
  const double sqrt2 = std::numbers::sqrt2;
  for (int m = 0; m <= degree; ++m) {
    simd::assoc_legendre_norm_batch(degree, m, cphi.data(), sphi.data(), n, pbar.data(), nullptr);
    if (m == 0) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += pbar[j];
      const double period = acc * step;
      kc.measured += period * period;
    } else {
      double ac = 0.0, as = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ac += pbar[j] * sqrt2 * std::cos(m * theta[j]);
        as += pbar[j] * sqrt2 * std::sin(m * theta[j]);
      }
      kc.measured += (ac * ac + as * as) * step * step;
    }
  }

  kc.dual_route = kernel_route(degree, circle);
  const double p0 = spectra::legendre_p(degree, 0.0);
  kc.closed_form = kPi * double(2 * degree + 1) * p0 * p0;
  return kc;
}

KuznecovSum kuznecov_sum(int max_degree, const geom::GeodesicSegment& circle, int fit_from) {
  require_unit_great_circle(circle);
  if (max_degree < 9) throw std::invalid_argument("growth fit needs max_degree >= 9");
  if (fit_from <= 0) fit_from = max_degree / 3;
  if (fit_from > max_degree - 3) throw std::invalid_argument("fit window too small");
  KuznecovSum out;
  out.lambdas.reserve(max_degree + 1);
  out.partial.reserve(max_degree + 1);
  double running = 0.0;
  std::vector<double> fx, fy;
  for (int deg = 0; deg <= max_degree; ++deg) {
    running += kernel_route(deg, circle);
    const double lam = std::sqrt(double(deg) * double(deg + 1));
    out.lambdas.push_back(lam);
    out.partial.push_back(running);
    if (deg >= fit_from && lam > 0.0 && running > 0.0) {
      fx.push_back(lam);
      fy.push_back(running);
    }
  }
  const LineFit fit = fit_loglog(fx, fy);
  out.exponent = fit.slope;
  out.exponent_stderr = fit.slope_stderr;
  out.r2 = fit.r2;
  return out;
}

QerProfile qer_mode_profile(int degree) {
  if (degree < 1) throw std::invalid_argument("mode profile needs degree >= 1");
  QerProfile q;
  q.degree = degree;
  q.weight.resize(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    const double pb = spectra::assoc_legendre_norm(degree, m, 0.0, 1.0);
    q.weight[m] = (m == 0 ? 1.0 : 2.0) * pb * pb;
  }
  for (double w : q.weight) q.total += w;

  // Reference distribution: the arcsine density integrated over the sample
  // cells [m/N - 1/(2N), m/N + 1/(2N)] (clipped to [0,1]), so its cumulative
  // is the arcsine CDF at cell right edges. Pointwise density samples would
  // put infinite mass at sigma = 1.
  double cum = 0.0, dist = 0.0;
  for (int m = 0; m <= degree; ++m) {
    cum += q.weight[m];
    const double edge = (double(m) + 0.5) / double(degree);
    dist = std::max(dist, std::abs(cum / q.total - arcsine_cdf(edge)));
  }
  q.cdf_distance = dist;
  return q;
}

double arcsine_cdf(double sigma) {
  return 2.0 / kPi * std::asin(std::clamp(sigma, 0.0, 1.0));
}

}  // namespace nlab::restriction
