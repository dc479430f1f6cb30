#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fraclab::quad {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Knobs shared by every integration routine. qmc_samples applies to the
// quasi-Monte Carlo paths only; seed makes the QMC shifts reproducible.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_refinements = 2000;
  long qmc_samples = 1L << 15;
  std::uint64_t seed = 20240817ULL;
  double qmc_rel_tol = 0.03;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a,b]. Splits the interval with
// the worst error estimate until the total estimate meets the tolerance.
double gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, double rel_tol, int max_intervals = 2000);

// Same, with mandatory initial subdivision points (for kinks / indicator
// boundaries). Points outside (a,b) are ignored.
double gk_segments(const std::function<double(double)>& f, double a, double b,
                   const std::vector<double>& breakpoints, double abs_tol,
                   double rel_tol, int max_intervals = 2000);

// tanh-sinh rule on (a,b); tolerates integrable endpoint singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

// Integral over R^n of a radial function: omega_{n-1} int_0^inf f(r) r^{n-1} dr.
// decay is the asymptotic power of f (f ~ C r^-decay, decay > n); the tail
// beyond the panel range is added analytically with an empirically refitted
// exponent. breakpoints mark kinks or indicator boundaries of f.
double integrate_radial(const std::function<double(double)>& f, int n,
                        double decay, const QuadratureSpec& spec,
                        std::vector<double> breakpoints = {});

} // namespace fraclab::quad
