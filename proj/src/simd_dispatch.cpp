#include "nlab/simd.hpp"

#include <atomic>
#include <stdexcept>

namespace nlab::simd {
namespace {

std::atomic<Lane> g_forced{Lane::Auto};

const detail::Ops& resolve() {
  Lane forced = g_forced.load(std::memory_order_relaxed);
  if (forced == Lane::Scalar) return detail::scalar_ops();
#if defined(NLAB_HAVE_AVX2_TU)
  if (forced == Lane::Avx2) return detail::avx2_ops();
  static const bool have = avx2_available();
  if (have) return detail::avx2_ops();
#endif
  return detail::scalar_ops();
}

}  // namespace

bool avx2_available() {
#if defined(NLAB_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void force_lane(Lane lane) {
  if (lane == Lane::Avx2 && !avx2_available())
    throw std::invalid_argument("simd: avx2 lane not available on this host");
  g_forced.store(lane, std::memory_order_relaxed);
}

Lane parse_lane(const std::string& name) {
  if (name == "auto") return Lane::Auto;
  if (name == "scalar") return Lane::Scalar;
  if (name == "avx2") return Lane::Avx2;
  throw std::invalid_argument("simd: unknown lane '" + name + "' (auto|scalar|avx2)");
}

const char* active_lane_name() {
  return &resolve() == &detail::scalar_ops() ? "scalar" : "avx2";
}

double sum(const double* x, std::size_t n) { return resolve().sum(x, n); }

double dot(const double* a, const double* b, std::size_t n) { return resolve().dot(a, b, n); }

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  return resolve().weighted_dot(a, b, w, n);
}

double weighted_abs_pow_sum(const double* v, const double* w, std::size_t n, double p) {
  return resolve().weighted_abs_pow_sum(v, w, n, p);
}

double max_abs(const double* v, std::size_t n) { return resolve().max_abs(v, n); }

void outer_accumulate(double* out, const double* a, std::size_t nr, const double* b,
                      std::size_t nc) {
  resolve().outer_accumulate(out, a, nr, b, nc);
}

void legendre_batch(int deg, const double* x, std::size_t n, double* pn, double* dpn) {
  resolve().legendre_batch(deg, x, n, pn, dpn);
}

void legendre_clenshaw_batch(const double* c, int deg, const double* x, std::size_t n, double* s,
                             double* ds) {
  resolve().legendre_clenshaw_batch(c, deg, x, n, s, ds);
}

void assoc_legendre_norm_batch(int deg, int order, const double* cphi, const double* sphi,
                               std::size_t n, double* out, double* dphi) {
  resolve().assoc_legendre_norm_batch(deg, order, cphi, sphi, n, out, dphi);
}

}  // namespace nlab::simd
