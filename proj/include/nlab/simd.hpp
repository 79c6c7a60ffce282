// Runtime-dispatched numeric kernels: scalar reference implementations plus
// AVX2 variants selected by CPU detection. Every kernel has both lanes and the
// two are equivalence-tested; the scalar lane is the semantic definition.
#pragma once

#include <cstddef>
#include <string>

namespace nlab::simd {

enum class Lane { Auto, Scalar, Avx2 };

bool avx2_available();

// Forces all kernels onto one lane. Throws std::invalid_argument if the lane
// is not available on this host. Lane::Auto restores detection.
void force_lane(Lane lane);
Lane parse_lane(const std::string& name);
const char* active_lane_name();

// Reductions use a fixed pairwise accumulation order, so results are
// reproducible run-to-run for a given lane.
double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
// sum_i w[i] * |v[i]|^p   (p = 1,2,4,6,8 use exact powers, otherwise pow)
double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p);
double max_abs(const double* v, std::size_t n);

// out[i*nc + j] += a[i] * b[j]
void outer_accumulate(double* out, const double* a, std::size_t nr, const double* b, std::size_t nc);

// Legendre polynomial P_deg at each x, optionally with dP_deg/dx.
// dpn may be nullptr.
void legendre_batch(int deg, const double* x, std::size_t n, double* pn, double* dpn);

// Clenshaw evaluation of S(x) = sum_{k=0}^{deg} c[k] P_k(x) and S'(x).
// ds may be nullptr.
void legendre_clenshaw_batch(const double* c, int deg, const double* x, std::size_t n,
                             double* s, double* ds);

// Orthonormal (over the unit sphere) associated Legendre block
//   pbar_N^m(cos phi) with  Y_{N,m} = pbar * {1, sqrt2 cos m theta, sqrt2 sin m theta}.
// cphi/sphi hold cos(phi), sin(phi) per point, sphi > 0 required.
// dphi (= d pbar / d phi) may be nullptr. Seeds are exponent-rescaled, so the
// result is correct (or a true underflow-to-zero) for any m, N <= 100000.
void assoc_legendre_norm_batch(int deg, int order, const double* cphi, const double* sphi,
                               std::size_t n, double* out, double* dphi);

namespace detail {

struct Ops {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
  double (*weighted_abs_pow_sum)(const double*, const double*, std::size_t, double);
  double (*max_abs)(const double*, std::size_t);
  void (*outer_accumulate)(double*, const double*, std::size_t, const double*, std::size_t);
  void (*legendre_batch)(int, const double*, std::size_t, double*, double*);
  void (*legendre_clenshaw_batch)(const double*, int, const double*, std::size_t, double*, double*);
  void (*assoc_legendre_norm_batch)(int, int, const double*, const double*, std::size_t, double*, double*);
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // only valid when the AVX2 TU is compiled in

}  // namespace detail

}  // namespace nlab::simd
