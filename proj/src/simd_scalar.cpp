#include "nlab/simd.hpp"

#include <algorithm>
#include <cmath>

#include "simd_internal.hpp"

namespace nlab::simd {
namespace {

using detail::abs_pow;
using detail::pairwise_reduce;

double k_sum(const double* x, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + len; ++i) s += x[i];
    return s;
  });
}

double k_dot(const double* a, const double* b, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + len; ++i) s += a[i] * b[i];
    return s;
  });
}

double k_weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + len; ++i) s += a[i] * b[i] * w[i];
    return s;
  });
}

double k_weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = i0; i < i0 + len; ++i) s += w[i] * abs_pow(v[i], p);
    return s;
  });
}

double k_max_abs(const double* v, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(v[i]));
  return m;
}

void k_outer_accumulate(double* out, const double* a, std::size_t nr, const double* b,
                        std::size_t nc) {
  for (std::size_t i = 0; i < nr; ++i) {
    double ai = a[i];
    double* row = out + i * nc;
    for (std::size_t j = 0; j < nc; ++j) row[j] += ai * b[j];
  }
}

void k_legendre_batch(int deg, const double* x, std::size_t n, double* pn, double* dpn) {
  for (std::size_t i = 0; i < n; ++i) {
    double xi = x[i];
    double p0 = 1.0, p1 = xi, d0 = 0.0, d1 = 1.0;
    if (deg == 0) { p1 = p0; d1 = d0; }
    for (int k = 1; k < deg; ++k) {
      double a = (2.0 * k + 1.0) / (k + 1.0);
      double b = double(k) / (k + 1.0);
      double p2 = a * xi * p1 - b * p0;
      double d2 = d0 + (2.0 * k + 1.0) * p1;
      p0 = p1; p1 = p2;
      d0 = d1; d1 = d2;
    }
    pn[i] = p1;
    if (dpn) dpn[i] = d1;
  }
}

void k_legendre_clenshaw_batch(const double* c, int deg, const double* x, std::size_t n,
                               double* s, double* ds) {
  for (std::size_t i = 0; i < n; ++i) {
    double xi = x[i];
    double b1 = 0.0, b2 = 0.0, db1 = 0.0, db2 = 0.0;
    for (int k = deg; k >= 0; --k) {
      double ak = (2.0 * k + 1.0) / (k + 1.0);
      double bk1 = (k + 1.0) / (k + 2.0);
      double b0 = c[k] + ak * xi * b1 - bk1 * b2;
      double db0 = ak * (b1 + xi * db1) - bk1 * db2;
      b2 = b1; b1 = b0;
      db2 = db1; db1 = db0;
    }
    s[i] = b1;
    if (ds) ds[i] = db1;
  }
}

void assoc_point(int deg, int m, double x, double sphi, double* out_p, double* out_dx) {
  const double rescale = 1e-280;
  const double ln_rescale = std::log(rescale);
  double L = detail::assoc_seed_log(m, sphi);
  int q = 0;
  double p0;
  if (L > detail::kSeedLogDirect) {
    p0 = std::exp(L);
  } else {
    q = static_cast<int>(std::floor(L / ln_rescale));
    p0 = std::exp(L - q * ln_rescale);
  }
  double d0 = (m == 0) ? 0.0 : -m * x / (sphi * sphi) * p0;
  double p1 = p0, d1 = d0;
  if (deg > m) {
    double c1 = std::sqrt(2.0 * m + 3.0);
    p1 = c1 * x * p0;
    d1 = c1 * (p0 + x * d0);
    for (int N = m + 2; N <= deg; ++N) {
      double a = detail::assoc_a(N, m);
      double b = detail::assoc_b(N, m);
      double p2 = a * x * p1 + b * p0;
      double d2 = a * (x * d1 + p1) + b * d0;
      p0 = p1; p1 = p2;
      d0 = d1; d1 = d2;
      if (q > 0 && (std::fabs(p1) > 1e8 || std::fabs(d1) > 1e8)) {
        p0 *= rescale; p1 *= rescale;
        d0 *= rescale; d1 *= rescale;
        --q;
      }
    }
  }
  if (q == 0) {
    *out_p = p1;
    *out_dx = d1;
  } else if (q == 1) {
    *out_p = p1 * rescale;
    *out_dx = d1 * rescale;
  } else {
    *out_p = 0.0;
    *out_dx = 0.0;
  }
}

void k_assoc_legendre_norm_batch(int deg, int m, const double* cphi, const double* sphi,
                                 std::size_t n, double* out, double* dphi) {
  for (std::size_t i = 0; i < n; ++i) {
    double p, dx;
    assoc_point(deg, m, cphi[i], sphi[i], &p, &dx);
    out[i] = p;
    if (dphi) dphi[i] = -sphi[i] * dx;
  }
}

}  // namespace

namespace detail {

const Ops& scalar_ops() {
  static const Ops ops = {
      k_sum,
      k_dot,
      k_weighted_dot,
      k_weighted_abs_pow_sum,
      k_max_abs,
      k_outer_accumulate,
      k_legendre_batch,
      k_legendre_clenshaw_batch,
      k_assoc_legendre_norm_batch,
  };
  return ops;
}

}  // namespace detail
}  // namespace nlab::simd
