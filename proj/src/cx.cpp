#include "nlab/cx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace nlab::cx {

namespace {

constexpr double kPi = std::numbers::pi;
using C = std::complex<double>;
constexpr double kSqrt2 = std::numbers::sqrt2;

// integer power, single-valued
C ipow(C w, int m) {
  C out{1.0, 0.0};
  C base = w;
  for (int e = m; e > 0; e >>= 1) {
    if (e & 1) out *= base;
    base *= base;
  }
  return out;
}

// Gegenbauer C_k^(alpha)(x) by the forward three-term recurrence, with a
// running rescale so intermediate values stay representable. Returns the
// log of the applied scale in *log_off.
C gegenbauer_scaled(int k, double alpha, C x, double* log_off) {
  *log_off = 0.0;
  if (k == 0) return {1.0, 0.0};
  C cm1{1.0, 0.0};
  C c0 = 2.0 * alpha * x;
  for (int n = 1; n < k; ++n) {
    C c1 = (2.0 * (n + alpha) * x * c0 - (n + 2.0 * alpha - 1.0) * cm1) /
           double(n + 1);
    cm1 = c0;
    c0 = c1;
    if (std::abs(c0.real()) > 1e250 || std::abs(c0.imag()) > 1e250) {
      cm1 *= 1e-250;
      c0 *= 1e-250;
      *log_off += 250.0 * std::numbers::ln10;
    }
  }
  return c0;
}

C eval_cx_term(const spectra::ModeIndex& m, const geom::CxPoint& p) {
  if (m.surface == geom::Surface::Torus) {
    const auto& tm = std::get<spectra::TorusMode>(m.id);
    if (tm.k1 == 0 && tm.k2 == 0) return {1.0, 0.0};
    C z = 2.0 * kPi * (double(tm.k1) * p.zeta[0] + double(tm.k2) * p.zeta[1]);
    return kSqrt2 * (tm.parity == spectra::Parity::Cos ? std::cos(z)
                                                       : std::sin(z));
  }
  if (m.surface != geom::Surface::Sphere)
    throw std::invalid_argument("eval_cx: no disc complexification");

  const auto& sm = std::get<spectra::SphereMode>(m.id);
  const int deg = sm.deg;
  const int ord = std::abs(sm.ord);
  const bool want_sin = sm.ord < 0;

  // normalized harmonic as a quadric polynomial:
  //   c * C_{deg-ord}^{(ord+1/2)}(z3) * (w+^ord +- w-^ord) / (2 or 2i)
  // with w+- = z1 +- i z2 and (for ord = 0) C^{(1/2)} the Legendre polynomial
  double logc = 0.5 * (std::log(2.0 * deg + 1.0) - std::log(4.0 * kPi) +
                       std::lgamma(double(deg - ord) + 1.0) -
                       std::lgamma(double(deg + ord) + 1.0));
  double log_off = 0.0;
  C poly = gegenbauer_scaled(deg - ord, ord + 0.5, p.z[2], &log_off);
  C angular{1.0, 0.0};
  if (ord > 0) {
    // (2 ord - 1)!! absorbed from d^ord/du^ord P_deg, sqrt2 from the real pair
    logc += std::lgamma(2.0 * ord + 1.0) - ord * std::numbers::ln2 -
            std::lgamma(double(ord) + 1.0) + 0.5 * std::numbers::ln2;
    C wp = ipow(p.z[0] + C{0.0, 1.0} * p.z[1], ord);
    C wm = ipow(p.z[0] - C{0.0, 1.0} * p.z[1], ord);
    angular = want_sin ? (wp - wm) / C{0.0, 2.0} : 0.5 * (wp + wm);
  }
  return poly * angular * std::exp(logc + log_off);
}

}  // namespace

std::complex<double> eval_cx(const spectra::EigenFn& fn,
                             const geom::CxPoint& z) {
  if (fn.surface != z.surface)
    throw std::invalid_argument("eval_cx: surface mismatch");
  C out{0.0, 0.0};
  for (const auto& [mode, coeff] : fn.terms) out += coeff * eval_cx_term(mode, z);
  return out;
}

double grauert_sqrt_rho(const geom::CxPoint& z) {
  if (z.surface == geom::Surface::Torus)
    return std::hypot(z.zeta[0].imag(), z.zeta[1].imag());
  if (z.surface == geom::Surface::Sphere) {
    double s = std::norm(z.z[0]) + std::norm(z.z[1]) + std::norm(z.z[2]);
    return 0.5 * std::acosh(std::max(s, 1.0));
  }
  throw std::invalid_argument("grauert_sqrt_rho: no disc complexification");
}

double growth_rate(const spectra::EigenFn& fn, const geom::CxPoint& z) {
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("growth_rate: lambda must be positive");
  return 2.0 * std::log(std::abs(eval_cx(fn, z))) / fn.lambda;
}

std::complex<double> highest_weight_beam(int degree, const geom::CxPoint& z) {
  if (z.surface != geom::Surface::Sphere)
    throw std::invalid_argument("highest_weight_beam: sphere only");
  if (degree < 0) throw std::invalid_argument("highest_weight_beam: degree < 0");
  // || (x1 + i x2)^N ||^2 over the sphere = 2 pi^(3/2) Gamma(N+1)/Gamma(N+3/2)
  double log_norm =
      0.5 * (std::log(2.0) + 1.5 * std::log(kPi) +
             std::lgamma(double(degree) + 1.0) - std::lgamma(degree + 1.5));
  C w = z.z[0] + C{0.0, 1.0} * z.z[1];
  if (w == C{0.0, 0.0}) return degree == 0 ? std::exp(-log_norm) : 0.0;
  return std::exp(double(degree) * std::log(w) - log_norm);
}

namespace {

struct Contour {
  const spectra::EigenFn* fn;
  const geom::GeodesicSegment* g;
  double fd_step;

  C value(C w) const {
    return eval_cx(*fn, geom::complexified_geodesic_point(*g, w));
  }
  C deriv_imag(C w) const {
    return (value(w + C{0.0, fd_step}) - value(w - C{0.0, fd_step})) /
           C{0.0, 2.0 * fd_step};
  }
  C deriv_real(C w) const {
    return (value(w + fd_step) - value(w - fd_step)) / (2.0 * fd_step);
  }
};

struct WalkState {
  double arg_sum = 0.0;     // accumulated phase increments
  C quad_sum{0.0, 0.0};     // trapezoid of g'/g dw
  double min_abs = 1e300;
  double max_abs = 0.0;
  double cr_defect = 0.0;
  int evals = 0;
};

// Refines [wa, wb] until each phase step is < pi/2, accumulating the phase
// increment and the g'/g trapezoid on the accepted sub-steps.
void walk_edge(const Contour& ct, WalkState& st, C wa, C wb, C ga, C gb,
               int depth) {
  double step_phase = std::abs(std::arg(gb / ga));
  if (step_phase < 0.5 * kPi || depth > 26) {
    if (step_phase >= 0.5 * kPi)
      throw std::runtime_error(
          "count_zeros_rect: phase not resolvable, zero on contour?");
    st.arg_sum += std::arg(gb / ga);
    C da = ct.deriv_imag(wa);
    C db = ct.deriv_imag(wb);
    st.quad_sum += 0.5 * (da / ga + db / gb) * (wb - wa);
    if (st.evals % 8 == 0) {
      C dr = ct.deriv_real(wa);
      double den = std::abs(da) + std::abs(dr) + 1e-300;
      st.cr_defect = std::max(st.cr_defect, std::abs(da - dr) / den);
    }
    ++st.evals;
    return;
  }
  C wm = 0.5 * (wa + wb);
  C gm = ct.value(wm);
  double a = std::abs(gm);
  st.min_abs = std::min(st.min_abs, a);
  st.max_abs = std::max(st.max_abs, a);
  walk_edge(ct, st, wa, wm, ga, gm, depth + 1);
  walk_edge(ct, st, wm, wb, gm, gb, depth + 1);
}

bool try_contour(const Contour& ct, const Rect& r, double lambda,
                 WalkState& st) {
  C corners[5] = {{r.t0, r.tau0},
                  {r.t1, r.tau0},
                  {r.t1, r.tau1},
                  {r.t0, r.tau1},
                  {r.t0, r.tau0}};
  for (int e = 0; e < 4; ++e) {
    C wa = corners[e], wb = corners[e + 1];
    // initial sampling fine enough that no panel can hide a full turn of
    // phase; the walker then refines anything still ambiguous
    double rate = 1.5 * lambda + 10.0;
    int panels = std::max(8, int(std::ceil(rate * std::abs(wb - wa) / (0.25 * kPi))));
    C wprev = wa;
    C gprev = ct.value(wa);
    st.min_abs = std::min(st.min_abs, std::abs(gprev));
    st.max_abs = std::max(st.max_abs, std::abs(gprev));
    for (int q = 1; q <= panels; ++q) {
      C wq = wa + (wb - wa) * (double(q) / panels);
      C gq = ct.value(wq);
      double a = std::abs(gq);
      st.min_abs = std::min(st.min_abs, a);
      st.max_abs = std::max(st.max_abs, a);
      walk_edge(ct, st, wprev, wq, gprev, gq, 1);
      wprev = wq;
      gprev = gq;
    }
  }
  // An exact (or subnormal) boundary sample leaves the phase undefined and
  // forces a nudge. The guard is absolute: the legitimate dynamic range over
  // a tall contour reaches cosh of the strip height, so a min/max ratio test
  // would reject healthy contours. Zeros merely near the boundary surface as
  // unresolvable phase steps in walk_edge instead.
  return st.min_abs > 1e-280;
}

}  // namespace

ZeroCount count_zeros_rect(const spectra::EigenFn& fn,
                           const geom::GeodesicSegment& g, Rect r) {
  if (!(r.t1 > r.t0) || !(r.tau1 > r.tau0))
    throw std::invalid_argument("count_zeros_rect: empty rectangle");
  Contour ct{&fn, &g, 1e-6 / std::max(1.0, fn.lambda)};
  double diam = std::hypot(r.t1 - r.t0, r.tau1 - r.tau0);

  ZeroCount out;
  out.rect = r;
  for (int attempt = 0;; ++attempt) {
    WalkState st;
    bool ok = false;
    try {
      ok = try_contour(ct, out.rect, fn.lambda, st);
    } catch (const std::runtime_error&) {
      ok = false;
    }
    if (ok) {
      double raw = st.arg_sum / (2.0 * kPi);
      out.count = int(std::lround(raw));
      C quad = st.quad_sum / C{0.0, 2.0 * kPi};
      out.winding_residual = std::abs(quad - double(out.count));
      out.cr_defect = st.cr_defect;
      out.min_boundary_abs = st.min_abs;
      out.nudges = attempt;
      if (std::abs(raw - out.count) > 0.1)
        throw std::runtime_error("count_zeros_rect: winding far from integer");
      return out;
    }
    if (attempt >= 5)
      throw std::runtime_error(
          "count_zeros_rect: contour keeps hitting zeros after nudges");
    double d = 1e-3 * diam * (attempt + 1);
    out.rect.t0 -= d;
    out.rect.t1 += d;
    out.rect.tau0 -= d;
    out.rect.tau1 += d;
  }
}

namespace {

// complex Newton polish; g' by the imaginary-direction centred step
bool polish_zero(const Contour& ct, C w0, const Rect& bounds, C& out) {
  C w = w0;
  for (int it = 0; it < 80; ++it) {
    C gv = ct.value(w);
    C dv = ct.deriv_imag(w);
    if (std::abs(dv) < 1e-300) return false;
    C step = gv / dv;
    w -= step;
    if (std::abs(step) < 1e-13 * (1.0 + std::abs(w))) break;
  }
  if (w.real() < bounds.t0 - 1e-9 || w.real() > bounds.t1 + 1e-9 ||
      w.imag() < bounds.tau0 - 1e-9 || w.imag() > bounds.tau1 + 1e-9)
    return false;
  out = w;
  return true;
}

void subdivide(const Contour& ct, const spectra::EigenFn& fn,
               const geom::GeodesicSegment& g, Rect r, int depth,
               std::vector<C>& zeros, bool& complete) {
  ZeroCount zc = count_zeros_rect(fn, g, r);
  if (zc.count == 0) return;
  double dt = r.t1 - r.t0, dtau = r.tau1 - r.tau0;
  double diag = std::hypot(dt, dtau);
  if (zc.count >= 1 && diag < 1e-7) {
    C w0{0.5 * (r.t0 + r.t1), 0.5 * (r.tau0 + r.tau1)};
    C w;
    Rect pad = r;
    pad.t0 -= diag;
    pad.t1 += diag;
    pad.tau0 -= diag;
    pad.tau1 += diag;
    if (polish_zero(ct, w0, pad, w)) {
      // nudged leaf contours overlap a little, so a zero sitting on a shared
      // cut line is rediscovered by both sides; the polished location is the
      // same point and is not new mass (distinct zeros sit >= leaf size apart)
      for (const C& z : zeros) {
        if (std::abs(z - w) <= 1e-9) return;
      }
      for (int k = 0; k < zc.count; ++k) zeros.push_back(w);  // multiplicity
    } else {
      complete = false;
    }
    return;
  }
  if (depth >= 40) {
    complete = false;
    return;
  }
  double tm = 0.5 * (r.t0 + r.t1), um = 0.5 * (r.tau0 + r.tau1);
  subdivide(ct, fn, g, {r.t0, tm, r.tau0, um}, depth + 1, zeros, complete);
  subdivide(ct, fn, g, {tm, r.t1, r.tau0, um}, depth + 1, zeros, complete);
  subdivide(ct, fn, g, {r.t0, tm, um, r.tau1}, depth + 1, zeros, complete);
  subdivide(ct, fn, g, {tm, r.t1, um, r.tau1}, depth + 1, zeros, complete);
}

}  // namespace

ZeroSet zero_locations(const spectra::EigenFn& fn,
                       const geom::GeodesicSegment& g, Rect r) {
  Contour ct{&fn, &g, 1e-6 / std::max(1.0, fn.lambda)};
  ZeroSet out;
  out.complete = true;
  ZeroCount top = count_zeros_rect(fn, g, r);
  if (top.count == 0) return out;
  subdivide(ct, fn, g, top.rect, 0, out.zeros, out.complete);

  // multiple entries at one location encode multiplicity; completeness means
  // the per-leaf counts reconcile with the whole-rectangle winding
  std::sort(out.zeros.begin(), out.zeros.end(), [](C a, C b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  if (int(out.zeros.size()) != top.count) out.complete = false;
  return out;
}

double predicted_intersection_density(const spectra::EigenFn& fn,
                                      const geom::GeodesicSegment& g) {
  if (fn.surface != geom::Surface::Torus ||
      g.surface != geom::Surface::Torus)
    throw std::invalid_argument("predicted_intersection_density: torus only");
  if (fn.terms.size() != 1)
    throw std::invalid_argument(
        "predicted_intersection_density: single wave only");
  const auto& tm = std::get<spectra::TorusMode>(fn.terms[0].first.id);
  if (tm.k1 == 0 && tm.k2 == 0)
    throw std::invalid_argument("predicted_intersection_density: constant mode");
  double dotk = tm.k1 * g.dir[0] + tm.k2 * g.dir[1];
  return 2.0 * std::abs(dotk);  // = lambda |<k_hat, xi>| / pi
}

double measured_real_zero_density(const spectra::EigenFn& fn,
                                  const geom::GeodesicSegment& g,
                                  double tau_window) {
  if (!(tau_window > 0.0))
    throw std::invalid_argument("measured_real_zero_density: window <= 0");
  // start the window where |g| is largest on the real axis, so no zero sits
  // near the seam of the closed parameter range (it would be counted twice)
  Contour ct{&fn, &g, 1e-6 / std::max(1.0, fn.lambda)};
  double best_t = 0.0, best_v = -1.0;
  const int n = 1024;
  for (int k = 0; k < n; ++k) {
    double t = g.length * k / n;
    double v = std::abs(ct.value({t, 0.0}));
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  Rect r{best_t, best_t + g.length, -tau_window, tau_window};
  ZeroCount zc = count_zeros_rect(fn, g, r);
  return double(zc.count) / g.length;
}

}  // namespace nlab::cx
