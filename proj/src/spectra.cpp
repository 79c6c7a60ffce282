#include "nlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "nlab/simd.hpp"

namespace nlab::spectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// ---------------------------------------------------------------- Bessel J

// Ascending series, reliable for x <= 12 in double precision.
double bessel_series(int m, double x) {
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  double t = std::exp(m * std::log(0.5 * x) - std::lgamma(m + 1.0));
  double sum = t;
  double q = 0.25 * x * x;
  for (int s = 1; s <= 80; ++s) {
    t *= -q / (double(s) * (m + s));
    sum += t;
    if (std::fabs(t) < 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

// Miller downward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
// Returns J_m and J_{m+1}.
void bessel_miller(int m, double x, double* jm, double* jm1) {
  int top = int(std::max(double(m + 1), x) + 15.0 * std::cbrt(std::max(x, 1.0)) + 20.0);
  if (top % 2) ++top;
  double fp1 = 0.0, f = 1e-30, norm = 0.0, vm = 0.0, vm1 = 0.0;
  for (int nu = top; nu >= 1; --nu) {
    double fm1 = (2.0 * nu / x) * f - fp1;
    fp1 = f;
    f = fm1;
    if (nu - 1 == m) vm = f;
    if (nu - 1 == m + 1) vm1 = f;
    if (nu - 1 >= 2 && (nu - 1) % 2 == 0) norm += 2.0 * f;
    if (std::fabs(f) > 1e250) {
      f *= 1e-250;
      fp1 *= 1e-250;
      norm *= 1e-250;
      vm *= 1e-250;
      vm1 *= 1e-250;
    }
  }
  norm += f;
  if (m + 1 == top) vm1 = 1e-30;  // negligible by construction of top
  *jm = vm / norm;
  *jm1 = vm1 / norm;
}

using RootFn = std::function<void(double, double*, double*)>;  // f and f'

double newton_bisect(const RootFn& fn, double lo, double hi) {
  double flo, fhi, d;
  fn(lo, &flo, &d);
  fn(hi, &fhi, &d);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::logic_error("root bracket does not straddle zero");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double f, df;
    fn(x, &f, &df);
    if ((f > 0.0) == (flo > 0.0)) lo = x; else hi = x;
    double step = df != 0.0 ? f / df : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) < 1e-14 * (1.0 + std::fabs(x))) return xn;
    x = xn;
  }
  return x;
}

std::vector<double> scan_roots(const RootFn& fn, double start, int count) {
  std::vector<double> roots;
  const double step = 0.5;
  double x0 = start, f0, d;
  fn(x0, &f0, &d);
  double limit = start + 20.0 + count * 4.0;
  for (double x1 = x0 + step; roots.size() < std::size_t(count); x1 += step) {
    if (x1 > limit) throw std::logic_error("bessel root scan exceeded its window");
    double f1;
    fn(x1, &f1, &d);
    if (f0 == 0.0) roots.push_back(x0);
    else if ((f0 > 0.0) != (f1 > 0.0)) roots.push_back(newton_bisect(fn, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

// ------------------------------------------------------------ mode helpers

double torus_lambda(int k1, int k2) { return 2.0 * kPi * std::hypot(double(k1), double(k2)); }

double sphere_lambda(int deg) { return std::sqrt(double(deg) * (deg + 1.0)); }

double disc_lambda(BoundaryCondition bc, int ang, int rad) {
  if (bc == BoundaryCondition::Dirichlet) return bessel_zeros(ang, rad).back();
  if (ang == 0) {
    if (rad == 1) return 0.0;  // constant Neumann mode
    return bessel_deriv_zeros(0, rad - 1).back();
  }
  return bessel_deriv_zeros(ang, rad).back();
}

// Radial L2 normalization: integral_0^1 J_m(lambda r)^2 r dr in closed form at
// a zero of J_m (Dirichlet) or of J_m' (Neumann).
double disc_norm_constant(BoundaryCondition bc, int ang, double lambda) {
  double radial;
  if (bc == BoundaryCondition::Dirichlet) {
    double jnext = bessel_j(ang + 1, lambda).j;
    radial = 0.5 * jnext * jnext;
  } else {
    double jm = bessel_j(ang, lambda).j;
    radial = 0.5 * (1.0 - double(ang) * ang / (lambda * lambda)) * jm * jm;
  }
  double angular = ang == 0 ? 2.0 * kPi : kPi;
  return 1.0 / std::sqrt(radial * angular);
}

struct TermEval {
  double value;
  double g1, g2;
};

double sphere_clamped_phi(double phi) {
  return std::clamp(phi, 1e-9, kPi - 1e-9);
}

TermEval eval_term(const ModeIndex& m, geom::Point p, bool want_grad) {
  TermEval out{0.0, 0.0, 0.0};
  switch (m.surface) {
    case geom::Surface::Torus: {
      const auto& t = std::get<TorusMode>(m.id);
      if (t.k1 == 0 && t.k2 == 0) { out.value = 1.0; return out; }
      double s = 2.0 * kPi * (t.k1 * p.a + t.k2 * p.b);
      double c = std::cos(s), sn = std::sin(s);
      if (t.parity == Parity::Cos) {
        out.value = kSqrt2 * c;
        if (want_grad) {
          out.g1 = -kSqrt2 * 2.0 * kPi * t.k1 * sn;
          out.g2 = -kSqrt2 * 2.0 * kPi * t.k2 * sn;
        }
      } else {
        out.value = kSqrt2 * sn;
        if (want_grad) {
          out.g1 = kSqrt2 * 2.0 * kPi * t.k1 * c;
          out.g2 = kSqrt2 * 2.0 * kPi * t.k2 * c;
        }
      }
      return out;
    }
    case geom::Surface::Sphere: {
      const auto& sm = std::get<SphereMode>(m.id);
      double phi = want_grad ? sphere_clamped_phi(p.a) : p.a;
      double cphi = std::cos(phi), sphi = std::sin(phi);
      if (!want_grad && sphi == 0.0) sphi = 1e-300;  // pbar value limit is exact
      int k = std::abs(sm.ord);
      double pbar, dpbar;
      simd::assoc_legendre_norm_batch(sm.deg, k, &cphi, &sphi, 1, &pbar,
                                      want_grad ? &dpbar : nullptr);
      double tfun, dtfun = 0.0;
      if (sm.ord == 0) {
        tfun = 1.0;
      } else if (sm.ord > 0) {
        tfun = kSqrt2 * std::cos(k * p.b);
        dtfun = -kSqrt2 * k * std::sin(k * p.b);
      } else {
        tfun = kSqrt2 * std::sin(k * p.b);
        dtfun = kSqrt2 * k * std::cos(k * p.b);
      }
      out.value = pbar * tfun;
      if (want_grad) {
        out.g1 = dpbar * tfun;
        out.g2 = pbar * dtfun / sphi;
      }
      return out;
    }
    case geom::Surface::Disc: {
      const auto& d = std::get<DiscMode>(m.id);
      if (m.lambda == 0.0) { out.value = 1.0 / std::sqrt(kPi); return out; }
      double c = disc_norm_constant(d.bc, d.ang, m.lambda);
      BesselValue bv = bessel_j(d.ang, m.lambda * p.a);
      double tfun, dtfun = 0.0;
      if (d.ang == 0) {
        tfun = 1.0;
      } else if (d.parity == Parity::Cos) {
        tfun = std::cos(d.ang * p.b);
        dtfun = -d.ang * std::sin(d.ang * p.b);
      } else {
        tfun = std::sin(d.ang * p.b);
        dtfun = d.ang * std::cos(d.ang * p.b);
      }
      out.value = c * bv.j * tfun;
      if (want_grad) {
        double r = std::max(p.a, 1e-9);
        out.g1 = c * m.lambda * bv.jp * tfun;
        out.g2 = c * bv.j * dtfun / r;
      }
      return out;
    }
  }
  throw std::logic_error("bad surface");
}

}  // namespace

BoundaryCondition parse_bc(const std::string& name) {
  if (name == "dirichlet") return BoundaryCondition::Dirichlet;
  if (name == "neumann") return BoundaryCondition::Neumann;
  throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

BesselValue bessel_j(int m, double x) {
  if (m < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
  if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
  BesselValue out;
  if (x == 0.0) {
    out.j = m == 0 ? 1.0 : 0.0;
    out.jp = m == 1 ? 0.5 : 0.0;
    return out;
  }
  double jm, jm1;
  if (x <= 12.0) {
    jm = bessel_series(m, x);
    jm1 = bessel_series(m + 1, x);
  } else {
    bessel_miller(m, x, &jm, &jm1);
  }
  out.j = jm;
  out.jp = (double(m) / x) * jm - jm1;
  return out;
}

std::vector<double> bessel_zeros(int m, int count) {
  if (count < 1) throw std::invalid_argument("bessel_zeros: count must be >= 1");
  RootFn fn = [m](double x, double* f, double* df) {
    BesselValue v = bessel_j(m, x);
    *f = v.j;
    *df = v.jp;
  };
  double start = m == 0 ? 1.0 : double(m) + 0.1;
  return scan_roots(fn, start, count);
}

std::vector<double> bessel_deriv_zeros(int m, int count) {
  if (count < 1) throw std::invalid_argument("bessel_deriv_zeros: count must be >= 1");
  RootFn fn = [m](double x, double* f, double* df) {
    BesselValue v = bessel_j(m, x);
    *f = v.jp;
    // from the Bessel equation: J'' = -J'/x - (1 - m^2/x^2) J
    *df = -v.jp / x - (1.0 - double(m) * m / (x * x)) * v.j;
  };
  double start = m == 0 ? 1.0 : std::max(0.5, 0.98 * m);
  return scan_roots(fn, start, count);
}

ModeIndex torus_mode(int k1, int k2, Parity parity) {
  if (k1 == 0 && k2 == 0)
    throw std::invalid_argument("torus_mode: use torus_constant() for k = 0");
  if (k1 < 0 || (k1 == 0 && k2 < 0)) { k1 = -k1; k2 = -k2; }
  ModeIndex m;
  m.surface = geom::Surface::Torus;
  m.id = TorusMode{k1, k2, parity};
  m.lambda = torus_lambda(k1, k2);
  m.lambda_sq = m.lambda * m.lambda;
  return m;
}

ModeIndex torus_constant() {
  ModeIndex m;
  m.surface = geom::Surface::Torus;
  m.id = TorusMode{0, 0, Parity::Cos};
  return m;
}

ModeIndex sphere_mode(int deg, int ord) {
  if (deg < 0 || std::abs(ord) > deg)
    throw std::invalid_argument("sphere_mode: need deg >= 0, |ord| <= deg");
  ModeIndex m;
  m.surface = geom::Surface::Sphere;
  m.id = SphereMode{deg, ord};
  m.lambda = sphere_lambda(deg);
  m.lambda_sq = double(deg) * (deg + 1.0);
  return m;
}

ModeIndex zonal_mode(int deg) { return sphere_mode(deg, 0); }

ModeIndex highest_weight_mode(int deg, Parity parity) {
  if (deg < 1) throw std::invalid_argument("highest_weight_mode: deg must be >= 1");
  return sphere_mode(deg, parity == Parity::Cos ? deg : -deg);
}

ModeIndex disc_mode(BoundaryCondition bc, int ang, int rad, Parity parity) {
  if (ang < 0 || rad < 1) throw std::invalid_argument("disc_mode: need ang >= 0, rad >= 1");
  if (ang == 0 && parity == Parity::Sin)
    throw std::invalid_argument("disc_mode: ang = 0 has no sin parity");
  ModeIndex m;
  m.surface = geom::Surface::Disc;
  m.id = DiscMode{bc, ang, rad, parity};
  m.lambda = disc_lambda(bc, ang, rad);
  m.lambda_sq = m.lambda * m.lambda;
  return m;
}

std::string mode_label(const ModeIndex& m) {
  char buf[64];
  switch (m.surface) {
    case geom::Surface::Torus: {
      const auto& t = std::get<TorusMode>(m.id);
      if (t.k1 == 0 && t.k2 == 0) return "torus[const]";
      std::snprintf(buf, sizeof buf, "torus[%d,%d]%s", t.k1, t.k2,
                    t.parity == Parity::Cos ? "cos" : "sin");
      return buf;
    }
    case geom::Surface::Sphere: {
      const auto& s = std::get<SphereMode>(m.id);
      std::snprintf(buf, sizeof buf, "sphere[%d,%d]", s.deg, s.ord);
      return buf;
    }
    case geom::Surface::Disc: {
      const auto& d = std::get<DiscMode>(m.id);
      std::snprintf(buf, sizeof buf, "disc-%c[%d,%d]%s",
                    d.bc == BoundaryCondition::Dirichlet ? 'd' : 'n', d.ang, d.rad,
                    d.ang == 0 ? "" : (d.parity == Parity::Cos ? "cos" : "sin"));
      return buf;
    }
  }
  return "?";
}

EigenFn eigenfn(const ModeIndex& m) { return combine({{m, 1.0}}); }

EigenFn combine(const std::vector<std::pair<ModeIndex, double>>& terms) {
  if (terms.empty()) throw std::invalid_argument("combine: empty mode list");
  EigenFn fn;
  fn.surface = terms.front().first.surface;
  fn.lambda = terms.front().first.lambda;
  fn.lambda_sq = terms.front().first.lambda_sq;
  for (const auto& [m, c] : terms) {
    if (m.surface != fn.surface) throw std::invalid_argument("combine: mixed surfaces");
    if (std::fabs(m.lambda - fn.lambda) > 1e-9 * (1.0 + fn.lambda))
      throw std::invalid_argument("combine: modes span different eigenvalues");
    (void)c;
  }
  fn.terms = terms;
  return fn;
}

double eval(const EigenFn& fn, geom::Point p) {
  p = geom::canonical(fn.surface, p);
  double v = 0.0;
  for (const auto& [m, c] : fn.terms) v += c * eval_term(m, p, false).value;
  return v;
}

std::array<double, 2> grad(const EigenFn& fn, geom::Point p) {
  p = geom::canonical(fn.surface, p);
  double g1 = 0.0, g2 = 0.0;
  for (const auto& [m, c] : fn.terms) {
    TermEval t = eval_term(m, p, true);
    g1 += c * t.g1;
    g2 += c * t.g2;
  }
  return {g1, g2};
}

std::vector<double> sample_grid(const EigenFn& fn, const geom::QuadGrid& grid) {
  if (grid.surface != fn.surface) throw std::invalid_argument("sample_grid: surface mismatch");
  std::size_t nr = grid.nrow, nc = grid.ncol;
  std::vector<double> vals(nr * nc, 0.0);
  std::vector<double> ra(nr), rb(nr), ca(nc), cb(nc);
  for (const auto& [m, coeff] : fn.terms) {
    switch (fn.surface) {
      case geom::Surface::Torus: {
        const auto& t = std::get<TorusMode>(m.id);
        if (t.k1 == 0 && t.k2 == 0) {
          for (auto& v : vals) v += coeff;
          break;
        }
        for (std::size_t i = 0; i < nr; ++i) {
          double a = 2.0 * kPi * t.k1 * grid.row[i];
          ra[i] = std::cos(a);
          rb[i] = std::sin(a);
        }
        for (std::size_t j = 0; j < nc; ++j) {
          double b = 2.0 * kPi * t.k2 * grid.col[j];
          ca[j] = std::cos(b);
          cb[j] = std::sin(b);
        }
        // cos(A+B) = cA cB - sA sB ; sin(A+B) = sA cB + cA sB
        std::vector<double> r1(nr), r2(nr);
        double s = coeff * kSqrt2;
        if (t.parity == Parity::Cos) {
          for (std::size_t i = 0; i < nr; ++i) { r1[i] = s * ra[i]; r2[i] = -s * rb[i]; }
        } else {
          for (std::size_t i = 0; i < nr; ++i) { r1[i] = s * rb[i]; r2[i] = s * ra[i]; }
        }
        simd::outer_accumulate(vals.data(), r1.data(), nr, ca.data(), nc);
        simd::outer_accumulate(vals.data(), r2.data(), nr, cb.data(), nc);
        break;
      }
      case geom::Surface::Sphere: {
        const auto& sm = std::get<SphereMode>(m.id);
        int k = std::abs(sm.ord);
        std::vector<double> cphi(nr), sphi(nr), pbar(nr);
        for (std::size_t i = 0; i < nr; ++i) {
          cphi[i] = std::cos(grid.row[i]);
          sphi[i] = std::max(std::sin(grid.row[i]), 1e-300);
        }
        simd::assoc_legendre_norm_batch(sm.deg, k, cphi.data(), sphi.data(), nr, pbar.data(),
                                        nullptr);
        for (std::size_t i = 0; i < nr; ++i) pbar[i] *= coeff;
        if (sm.ord == 0) {
          std::fill(ca.begin(), ca.end(), 1.0);
        } else if (sm.ord > 0) {
          for (std::size_t j = 0; j < nc; ++j) ca[j] = kSqrt2 * std::cos(k * grid.col[j]);
        } else {
          for (std::size_t j = 0; j < nc; ++j) ca[j] = kSqrt2 * std::sin(k * grid.col[j]);
        }
        simd::outer_accumulate(vals.data(), pbar.data(), nr, ca.data(), nc);
        break;
      }
      case geom::Surface::Disc: {
        const auto& d = std::get<DiscMode>(m.id);
        if (m.lambda == 0.0) {
          double v = coeff / std::sqrt(kPi);
          for (auto& x : vals) x += v;
          break;
        }
        double c = disc_norm_constant(d.bc, d.ang, m.lambda);
        std::vector<double> rad(nr);
        for (std::size_t i = 0; i < nr; ++i)
          rad[i] = coeff * c * bessel_j(d.ang, m.lambda * grid.row[i]).j;
        if (d.ang == 0) {
          std::fill(ca.begin(), ca.end(), 1.0);
        } else if (d.parity == Parity::Cos) {
          for (std::size_t j = 0; j < nc; ++j) ca[j] = std::cos(d.ang * grid.col[j]);
        } else {
          for (std::size_t j = 0; j < nc; ++j) ca[j] = std::sin(d.ang * grid.col[j]);
        }
        simd::outer_accumulate(vals.data(), rad.data(), nr, ca.data(), nc);
        break;
      }
    }
  }
  return vals;
}

std::vector<ModeIndex> enumerate_modes(geom::Surface s, double lambda_max, BoundaryCondition bc) {
  if (!(lambda_max >= 0.0)) throw std::invalid_argument("enumerate_modes: lambda_max >= 0");
  std::vector<ModeIndex> modes;
  switch (s) {
    case geom::Surface::Torus: {
      modes.push_back(torus_constant());
      int kmax = int(lambda_max / (2.0 * kPi)) + 1;
      for (int k1 = 0; k1 <= kmax; ++k1) {
        int lo = k1 == 0 ? 1 : -kmax;
        for (int k2 = lo; k2 <= kmax; ++k2) {
          if (k1 == 0 && k2 == 0) continue;
          if (torus_lambda(k1, k2) > lambda_max) continue;
          modes.push_back(torus_mode(k1, k2, Parity::Cos));
          modes.push_back(torus_mode(k1, k2, Parity::Sin));
        }
      }
      break;
    }
    case geom::Surface::Sphere: {
      for (int deg = 0; sphere_lambda(deg) <= lambda_max; ++deg)
        for (int ord = -deg; ord <= deg; ++ord) modes.push_back(sphere_mode(deg, ord));
      break;
    }
    case geom::Surface::Disc: {
      for (int ang = 0; ang <= int(lambda_max) + 1; ++ang) {
        int est = int((lambda_max - (ang > 0 ? 0.9 * ang : 0.0)) / kPi) + 4;
        std::vector<double> zeros;
        if (bc == BoundaryCondition::Dirichlet) {
          zeros = bessel_zeros(ang, est);
        } else if (ang == 0) {
          zeros.push_back(0.0);
          auto dz = bessel_deriv_zeros(0, est);
          zeros.insert(zeros.end(), dz.begin(), dz.end());
        } else {
          zeros = bessel_deriv_zeros(ang, est);
        }
        bool any = false;
        for (int rad = 1; rad <= int(zeros.size()); ++rad) {
          if (zeros[rad - 1] > lambda_max) break;
          any = true;
          if (bc == BoundaryCondition::Neumann && ang == 0 && rad == 1) {
            modes.push_back(disc_mode(bc, 0, 1, Parity::Cos));
            continue;
          }
          modes.push_back(disc_mode(bc, ang, rad, Parity::Cos));
          if (ang > 0) modes.push_back(disc_mode(bc, ang, rad, Parity::Sin));
        }
        if (!any && ang > 0) break;  // first zeros only move up with ang
      }
      break;
    }
  }
  std::stable_sort(modes.begin(), modes.end(), [](const ModeIndex& a, const ModeIndex& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return mode_label(a) < mode_label(b);
  });
  return modes;
}

std::vector<WeylPoint> weyl_counts(const std::vector<ModeIndex>& modes, geom::Surface s,
                                   const std::vector<double>& lambdas) {
  std::vector<double> evs(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) evs[i] = modes[i].lambda;
  std::sort(evs.begin(), evs.end());
  std::vector<WeylPoint> out;
  out.reserve(lambdas.size());
  double area = geom::surface_area(s);
  for (double lam : lambdas) {
    if (!evs.empty() && lam > evs.back())
      throw std::invalid_argument("weyl_counts: lambda beyond enumerated range");
    WeylPoint w;
    w.lambda = lam;
    w.count = std::upper_bound(evs.begin(), evs.end(), lam) - evs.begin();
    w.main_term = area * lam * lam / (4.0 * kPi);
    w.remainder = double(w.count) - w.main_term;
    out.push_back(w);
  }
  return out;
}

double legendre_p(int deg, double x) {
  double p;
  simd::legendre_batch(deg, &x, 1, &p, nullptr);
  return p;
}

double assoc_legendre_norm(int deg, int ord, double cphi, double sphi) {
  double p;
  simd::assoc_legendre_norm_batch(deg, ord, &cphi, &sphi, 1, &p, nullptr);
  return p;
}

double projection_kernel(int deg, geom::Point x, geom::Point y) {
  double r = geom::distance(geom::Surface::Sphere, x, y);
  return (2.0 * deg + 1.0) / (4.0 * kPi) * legendre_p(deg, std::cos(r));
}

double projection_kernel_modesum(int deg, geom::Point x, geom::Point y) {
  double acc = 0.0;
  for (int ord = -deg; ord <= deg; ++ord) {
    EigenFn f = eigenfn(sphere_mode(deg, ord));
    acc += eval(f, x) * eval(f, y);
  }
  return acc;
}

double poisson_kernel_closed(double t, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson kernel needs t > 0");
  return std::sinh(t) / (4.0 * kPi * kSqrt2 * std::pow(std::cosh(t) - std::cos(r), 1.5));
}

double poisson_kernel_spectral(double t, double r, int deg_max) {
  if (!(t > 0.0)) throw std::invalid_argument("poisson kernel needs t > 0");
  std::vector<double> c(deg_max + 1);
  for (int n = 0; n <= deg_max; ++n)
    c[n] = std::exp(-t * (n + 0.5)) * (2.0 * n + 1.0) / (4.0 * kPi);
  double x = std::cos(r), s;
  simd::legendre_clenshaw_batch(c.data(), deg_max, &x, 1, &s, nullptr);
  return s;
}

SpectralFilter::SpectralFilter(double eps) : eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("filter width eps must be positive");
  auto fill = [this](int n, std::vector<double>& x, std::vector<double>& w,
                     std::vector<double>& b) {
    geom::gauss_legendre(n, eps_ / 2.0, eps_, x, w);
    b.resize(n);
    for (int i = 0; i < n; ++i) {
      double u = (x[i] - 0.75 * eps_) / (0.25 * eps_);
      b[i] = std::exp(-1.0 / (1.0 - u * u));
    }
  };
  fill(200, node_, nodew_, bump_);
  fill(800, fine_node_, fine_nodew_, fine_bump_);
  double total = 0.0;
  for (std::size_t i = 0; i < fine_node_.size(); ++i) total += fine_nodew_[i] * fine_bump_[i];
  norm_ = 1.0 / (2.0 * total);
}

double SpectralFilter::rho_hat(double t) const {
  t = std::fabs(t);
  if (t <= eps_ / 2.0 || t >= eps_) return 0.0;
  double u = (t - 0.75 * eps_) / (0.25 * eps_);
  return norm_ * std::exp(-1.0 / (1.0 - u * u));
}

double SpectralFilter::rho(double s) const {
  s = std::fabs(s);
  // ~10 quadrature nodes per oscillation of cos(s t) across the support
  bool fine = s * eps_ * 10.0 / (4.0 * kPi) > 180.0;
  const auto& x = fine ? fine_node_ : node_;
  const auto& w = fine ? fine_nodew_ : nodew_;
  const auto& b = fine ? fine_bump_ : bump_;
  if (s * eps_ * 10.0 / (4.0 * kPi) > 700.0) return 0.0;  // below quadrature floor
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * b[i] * std::cos(s * x[i]);
  return 2.0 * norm_ * acc;
}

FilterApplication apply_rho_filter(const SpectralFilter& filter, double lambda,
                                   const EigenFn& fn, const std::vector<ModeIndex>& basis,
                                   const geom::QuadGrid& grid) {
  double cutoff = 0.0;
  for (const auto& m : basis) cutoff = std::max(cutoff, m.lambda);
  if (cutoff < lambda + 10.0 / filter.eps())
    throw std::invalid_argument("apply_rho_filter: basis cutoff below lambda + 10/eps");
  std::vector<double> target = sample_grid(fn, grid);
  std::vector<double> acc(target.size(), 0.0);
  double tail = 0.0;
  for (const auto& m : basis) {
    double w = filter.rho(lambda - m.lambda);
    if (std::fabs(m.lambda - fn.lambda) > 1e-9 * (1.0 + fn.lambda)) tail += std::fabs(w);
    if (std::fabs(w) < 1e-16) continue;
    std::vector<double> mv = sample_grid(eigenfn(m), grid);
    double coef = simd::weighted_dot(target.data(), mv.data(), grid.weight.data(), mv.size());
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * coef * mv[i];
  }
  double err = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double d = acc[i] - target[i];
    err += grid.weight[i] * d * d;
  }
  FilterApplication out;
  out.reconstruction_error_l2 = std::sqrt(err);
  out.tail_bound = tail;
  return out;
}

void filtered_kernel_batch(const SpectralFilter& filter, double lambda, int deg_max,
                           const double* r, std::size_t n, double* k, double* dk) {
  if (sphere_lambda(deg_max) < lambda + 10.0 / filter.eps())
    throw std::invalid_argument("filtered_kernel_batch: degree cutoff below lambda + 10/eps");
  std::vector<double> c(deg_max + 1);
  for (int d = 0; d <= deg_max; ++d)
    c[d] = filter.rho(lambda - sphere_lambda(d)) * (2.0 * d + 1.0) / (4.0 * kPi);
  std::vector<double> x(n), s(n), ds(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(r[i]);
  simd::legendre_clenshaw_batch(c.data(), deg_max, x.data(), n, s.data(),
                                dk ? ds.data() : nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    if (k) k[i] = s[i];
    if (dk) dk[i] = -std::sin(r[i]) * ds[i];
  }
}

}  // namespace nlab::spectra
