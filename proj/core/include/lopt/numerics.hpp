#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace lopt::numerics {

struct BisectResult {
  double root = 0.0;
  double width = 0.0; // final bracket width
  int iterations = 0;
};

// Plain bisection; throws NumericalError naming `context` and the endpoint
// values when f(lo) and f(hi) share a sign.
BisectResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                    const std::string& context);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Brent maximisation on [lo, hi].
Extremum maximize_brent(const std::function<double(double)>& f, double lo, double hi,
                        int bits = 40);

struct NelderMeadOptions {
  double x_tol = 1e-6;
  double f_tol = 1e-10;
  int max_evaluations = 2000;
  double initial_step = 0.05;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0; // minimum
  int evaluations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt = {});

// Runs body(i) for i in [0, n) on up to `workers` threads. Exceptions are
// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

} // namespace lopt::numerics
