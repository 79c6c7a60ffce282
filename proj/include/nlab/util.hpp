#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept with the usual slope
// standard error sqrt(SSR/(n-2) / Sxx). Requires n >= 3 distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// OLS on (log x, log y); inputs must be strictly positive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Golden-section maximization of f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 80);

// Global worker cap used by parallel_for; 0 means hardware concurrency.
void set_thread_cap(int threads);
int thread_cap();

// Runs body(i) for i in [0, n) on up to thread_cap() workers. Exceptions from
// body propagate to the caller. Falls back to the calling thread when the
// effective worker count is 1.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nlab
