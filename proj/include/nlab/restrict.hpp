#pragma once

// Restrictions of eigenfunctions to closed curves: orbital Fourier data,
// period integrals over great circles and their cluster sums, boundary sign
// counts, and the Fourier-weight profile of single modes on the equator.

#include <complex>
#include <vector>

#include "nlab/geom.hpp"
#include "nlab/spectra.hpp"

namespace nlab::restriction {

struct RestrictedFn {
  geom::GeodesicSegment curve;
  double length = 0.0;
  std::size_t count = 0;        // power of two
  std::vector<double> values;   // fn(curve(t_j)), t_j = j * length / count
};

// Samples fn along the geodesic at a power-of-two count, at least 64 and at
// least 8 samples per wavelength 2 pi / lambda.
RestrictedFn restrict_to_geodesic(const spectra::EigenFn& fn,
                                  const geom::GeodesicSegment& g);

// Disc boundary circle r = 1 (not a geodesic; sampled directly).
RestrictedFn restrict_to_boundary(const spectra::EigenFn& fn);

struct FourierData {
  std::vector<std::complex<double>> coeff;  // nu(n) indexed by FFT bin
  double parseval_rel = 0.0;  // defect of mean|phi|^2 against sum |nu|^2
};

// nu(n) = (1/count) sum_j values_j exp(-2 pi i n j / count). Requires a
// closed curve.
FourierData orbital_fourier(const RestrictedFn& r);

struct SignChangeReport {
  int count = 0;            // cyclic sign changes, always even
  bool near_zero_flag = false;  // some sample too close to zero to trust
  double min_abs = 0.0;
  double max_abs = 0.0;
};

SignChangeReport sign_changes(const RestrictedFn& r, double tol_rel = 1e-9);

// One eigenspace of the sphere against a closed great circle: the sum of
// squared period integrals over an orthonormal eigenbasis, computed three
// ways. `measured` integrates each basis mode along the circle; `dual_route`
// is the double circle integral of the spectral projection kernel;
// `closed_form` is pi (2N+1) P_N(0)^2.
struct KuznecovCluster {
  int degree = 0;
  double lambda = 0.0;
  double measured = 0.0;
  double dual_route = 0.0;
  double closed_form = 0.0;
};

KuznecovCluster kuznecov_cluster(int degree, const geom::GeodesicSegment& circle);

struct KuznecovSum {
  std::vector<double> lambdas;   // cluster eigenvalues sqrt(N(N+1))
  std::vector<double> partial;   // running sum of clusters up to lambda
  double exponent = 0.0;         // log-log slope of the partial sums
  double exponent_stderr = 0.0;
  double r2 = 0.0;
};

// Partial sums S(lambda) of kernel-route clusters up to max_degree; the
// growth exponent is fitted on degrees >= fit_from (default max_degree / 3).
KuznecovSum kuznecov_sum(int max_degree, const geom::GeodesicSegment& circle,
                         int fit_from = 0);

// Fourier weights of the degree-N eigenspace on the equator: W(m) sums the
// squared equator values of the (N, +-m) pair. Total mass is (2N+1)/(4 pi);
// the normalized profile in sigma = m/N approaches the arcsine law.
struct QerProfile {
  int degree = 0;
  std::vector<double> weight;   // W(m), m = 0..N
  double total = 0.0;
  double cdf_distance = 0.0;    // sup distance to the arcsine law (cell-integrated)
};

QerProfile qer_mode_profile(int degree);

double arcsine_cdf(double sigma);

}  // namespace nlab::restriction
