#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "nlab/simd.hpp"
#include "simd_internal.hpp"

namespace nlab::simd {
namespace {

using detail::abs_pow;
using detail::pairwise_reduce;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double k_sum(const double* x, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0, end4 = i0 + (len & ~std::size_t(3));
    for (; i < end4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < i0 + len; ++i) s += x[i];
    return s;
  });
}

double k_dot(const double* a, const double* b, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0, end4 = i0 + (len & ~std::size_t(3));
    for (; i < end4; i += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < i0 + len; ++i) s += a[i] * b[i];
    return s;
  });
}

double k_weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = i0, end4 = i0 + (len & ~std::size_t(3));
    for (; i < end4; i += 4) {
      __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(w + i), acc);
    }
    double s = hsum(acc);
    for (; i < i0 + len; ++i) s += a[i] * b[i] * w[i];
    return s;
  });
}

double k_weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
  bool fast = (p == 1.0 || p == 2.0 || p == 4.0 || p == 6.0 || p == 8.0);
  return pairwise_reduce(0, n, [&](std::size_t i0, std::size_t len) {
    std::size_t i = i0;
    double s = 0.0;
    if (fast) {
      __m256d acc = _mm256_setzero_pd();
      std::size_t end4 = i0 + (len & ~std::size_t(3));
      for (; i < end4; i += 4) {
        __m256d x = _mm256_loadu_pd(v + i);
        __m256d t;
        if (p == 1.0) {
          t = vabs(x);
        } else {
          t = _mm256_mul_pd(x, x);
          if (p == 4.0) t = _mm256_mul_pd(t, t);
          if (p == 6.0) t = _mm256_mul_pd(_mm256_mul_pd(t, t), t);
          if (p == 8.0) { t = _mm256_mul_pd(t, t); t = _mm256_mul_pd(t, t); }
        }
        acc = _mm256_fmadd_pd(t, _mm256_loadu_pd(w + i), acc);
      }
      s = hsum(acc);
    }
    for (; i < i0 + len; ++i) s += w[i] * abs_pow(v[i], p);
    return s;
  });
}

double k_max_abs(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0, end4 = n & ~std::size_t(3);
  for (; i < end4; i += 4) acc = _mm256_max_pd(acc, vabs(_mm256_loadu_pd(v + i)));
  double m = 0.0;
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (double lv : lanes) m = std::max(m, lv);
  for (; i < n; ++i) m = std::max(m, std::fabs(v[i]));
  return m;
}

void k_outer_accumulate(double* out, const double* a, std::size_t nr, const double* b,
                        std::size_t nc) {
  std::size_t end4 = nc & ~std::size_t(3);
  for (std::size_t i = 0; i < nr; ++i) {
    __m256d ai = _mm256_set1_pd(a[i]);
    double* row = out + i * nc;
    std::size_t j = 0;
    for (; j < end4; j += 4)
      _mm256_storeu_pd(row + j, _mm256_fmadd_pd(ai, _mm256_loadu_pd(b + j), _mm256_loadu_pd(row + j)));
    for (; j < nc; ++j) row[j] += a[i] * b[j];
  }
}

void k_legendre_batch(int deg, const double* x, std::size_t n, double* pn, double* dpn) {
  std::size_t i = 0, end4 = n & ~std::size_t(3);
  for (; i < end4; i += 4) {
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d p0 = _mm256_set1_pd(1.0), p1 = xi;
    __m256d d0 = _mm256_setzero_pd(), d1 = _mm256_set1_pd(1.0);
    if (deg == 0) { p1 = p0; d1 = d0; }
    for (int k = 1; k < deg; ++k) {
      __m256d a = _mm256_set1_pd((2.0 * k + 1.0) / (k + 1.0));
      __m256d b = _mm256_set1_pd(double(k) / (k + 1.0));
      __m256d p2 = _mm256_fnmadd_pd(b, p0, _mm256_mul_pd(a, _mm256_mul_pd(xi, p1)));
      __m256d d2 = _mm256_fmadd_pd(_mm256_set1_pd(2.0 * k + 1.0), p1, d0);
      p0 = p1; p1 = p2;
      d0 = d1; d1 = d2;
    }
    _mm256_storeu_pd(pn + i, p1);
    if (dpn) _mm256_storeu_pd(dpn + i, d1);
  }
  if (i < n) detail::scalar_ops().legendre_batch(deg, x + i, n - i, pn + i, dpn ? dpn + i : nullptr);
}

void k_legendre_clenshaw_batch(const double* c, int deg, const double* x, std::size_t n,
                               double* s, double* ds) {
  std::size_t i = 0, end4 = n & ~std::size_t(3);
  for (; i < end4; i += 4) {
    __m256d xi = _mm256_loadu_pd(x + i);
    __m256d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
    __m256d db1 = _mm256_setzero_pd(), db2 = _mm256_setzero_pd();
    for (int k = deg; k >= 0; --k) {
      __m256d ak = _mm256_set1_pd((2.0 * k + 1.0) / (k + 1.0));
      __m256d bk1 = _mm256_set1_pd((k + 1.0) / (k + 2.0));
      __m256d axb1 = _mm256_mul_pd(ak, _mm256_mul_pd(xi, b1));
      __m256d b0 = _mm256_fnmadd_pd(bk1, b2, _mm256_add_pd(_mm256_set1_pd(c[k]), axb1));
      __m256d inner = _mm256_fmadd_pd(xi, db1, b1);
      __m256d db0 = _mm256_fnmadd_pd(bk1, db2, _mm256_mul_pd(ak, inner));
      b2 = b1; b1 = b0;
      db2 = db1; db1 = db0;
    }
    _mm256_storeu_pd(s + i, b1);
    if (ds) _mm256_storeu_pd(ds + i, db1);
  }
  if (i < n)
    detail::scalar_ops().legendre_clenshaw_batch(c, deg, x + i, n - i, s + i, ds ? ds + i : nullptr);
}

// Vector path requires seeds representable without rescaling; near-pole points
// fall back to the scalar rescaled recurrence chunk by chunk.
void k_assoc_legendre_norm_batch(int deg, int m, const double* cphi, const double* sphi,
                                 std::size_t n, double* out, double* dphi) {
  const auto& scalar = detail::scalar_ops();
  std::size_t i = 0;
  while (i < n) {
    std::size_t len = std::min<std::size_t>(4, n - i);
    bool direct = (len == 4);
    if (direct) {
      for (std::size_t j = i; j < i + 4; ++j)
        if (detail::assoc_seed_log(m, sphi[j]) <= detail::kSeedLogDirect) { direct = false; break; }
    }
    if (!direct) {
      scalar.assoc_legendre_norm_batch(deg, m, cphi + i, sphi + i, len, out + i,
                                       dphi ? dphi + i : nullptr);
      i += len;
      continue;
    }
    alignas(32) double seed[4];
    for (std::size_t j = 0; j < 4; ++j)
      seed[j] = std::exp(detail::assoc_seed_log(m, sphi[i + j]));
    __m256d x = _mm256_loadu_pd(cphi + i);
    __m256d sp = _mm256_loadu_pd(sphi + i);
    __m256d p0 = _mm256_load_pd(seed);
    __m256d d0 = _mm256_setzero_pd();
    if (m > 0) {
      __m256d inv_s2 = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(sp, sp));
      d0 = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(-double(m)), _mm256_mul_pd(x, inv_s2)), p0);
    }
    __m256d p1 = p0, d1 = d0;
    if (deg > m) {
      __m256d c1 = _mm256_set1_pd(std::sqrt(2.0 * m + 3.0));
      p1 = _mm256_mul_pd(c1, _mm256_mul_pd(x, p0));
      d1 = _mm256_mul_pd(c1, _mm256_fmadd_pd(x, d0, p0));
      for (int N = m + 2; N <= deg; ++N) {
        __m256d a = _mm256_set1_pd(detail::assoc_a(N, m));
        __m256d b = _mm256_set1_pd(detail::assoc_b(N, m));
        __m256d p2 = _mm256_fmadd_pd(b, p0, _mm256_mul_pd(a, _mm256_mul_pd(x, p1)));
        __m256d d2 = _mm256_fmadd_pd(b, d0, _mm256_mul_pd(a, _mm256_fmadd_pd(x, d1, p1)));
        p0 = p1; p1 = p2;
        d0 = d1; d1 = d2;
      }
    }
    _mm256_storeu_pd(out + i, p1);
    if (dphi) {
      __m256d neg_s = _mm256_sub_pd(_mm256_setzero_pd(), sp);
      _mm256_storeu_pd(dphi + i, _mm256_mul_pd(neg_s, d1));
    }
    i += 4;
  }
}

}  // namespace

namespace detail {

const Ops& avx2_ops() {
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
