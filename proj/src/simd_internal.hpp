// Shared pieces of the scalar and AVX2 kernel TUs: recurrence coefficients,
// exponent-safe associated-Legendre seeds, pairwise reduction scaffolding.
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace nlab::simd::detail {

inline constexpr std::size_t kBlock = 128;

// Recursive pairwise combine over fixed-size base blocks. Block(i0, len)
// must return the serial (or vectorized) sum of terms i0 .. i0+len-1.
template <class Block>
double pairwise_reduce(std::size_t i0, std::size_t n, Block block) {
  if (n <= kBlock) return block(i0, n);
  std::size_t half = (n / 2 + kBlock - 1) / kBlock * kBlock;
  return pairwise_reduce(i0, half, block) + pairwise_reduce(i0 + half, n - half, block);
}

inline double abs_pow(double v, double p) {
  if (p == 1.0) return std::fabs(v);
  if (p == 2.0) return v * v;
  if (p == 4.0) { double q = v * v; return q * q; }
  if (p == 6.0) { double q = v * v; return q * q * q; }
  if (p == 8.0) { double q = v * v; q = q * q; return q * q; }
  return std::pow(std::fabs(v), p);
}

// log of the orthonormal diagonal seed pbar_m^m(cos phi) = C_m sin(phi)^m,
// C_m = sqrt( (2m+1)!! / (4 pi (2m)!!) ).
inline double assoc_seed_log(int m, double sphi) {
  double log_c = 0.5 * (std::lgamma(2.0 * m + 2.0) - m * std::log(4.0) -
                        2.0 * std::lgamma(m + 1.0) - std::log(4.0 * std::numbers::pi));
  return log_c + m * std::log(sphi);
}

// pbar_N^m = an * x * pbar_{N-1}^m + bn * pbar_{N-2}^m
inline double assoc_a(int N, int m) {
  return std::sqrt(((2.0 * N - 1.0) * (2.0 * N + 1.0)) /
                   ((double(N) - m) * (double(N) + m)));
}
inline double assoc_b(int N, int m) {
  return -std::sqrt(((2.0 * N + 1.0) * (N - 1.0 - m) * (N - 1.0 + m)) /
                    ((2.0 * N - 3.0) * (double(N) - m) * (double(N) + m)));
}

// Seeds underflow below roughly e^-660; such points need the rescaled path.
inline constexpr double kSeedLogDirect = -660.0;

}  // namespace nlab::simd::detail
