#pragma once

#include "fraclab/quadrature.hpp"

#include <functional>
#include <vector>

namespace fraclab::fraclap {

// Radial function handle with derivatives. decay_exponent is the asymptotic
// power law (value ~ C r^-decay_exponent) used for the analytic kernel tail;
// breakpoints mark radii where the profile is not smooth.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double decay_exponent = 0.0;
  std::vector<double> breakpoints;
};

RadialProfile inverse_quadratic_profile(double rho);

// C(n,t) = 4^t Gamma(n/2+t) / (pi^{n/2} |Gamma(-t)|)
double kernel_normalization(int n, double t);

// Prefactor K in (-Delta)^t (1+|x|^2)^{-rho} = K * 2F1(n/2+t, rho+t; n/2; -r^2).
// Calibrated against the singular-integral evaluator at r = 0; cached.
double inverse_quadratic_prefactor(int n, double t, double rho);

double fraclap_inverse_quadratic(int n, double t, double rho, double r);

// Principal-value evaluation of (-Delta)^t f at radius r for a radial f:
// 1D reduction with an angular kernel, symmetric singularity window with
// second-order Taylor correction, and an analytic power-law tail.
double fraclap_radial_numeric(const RadialProfile& profile, int n, double t,
                              double r, const quad::QuadratureSpec& spec = {});

// Bubble normalization: c with (-Delta)^s [c (1+r^2)^{-(n-2s)/2}] equal to
// the p-th power of the same function. Cached per (n,s).
double bubble_normalization(int n, double s);

// max relative residual of (-Delta)^s U = U^p over the grid (closed forms)
double check_bubble_pde(int n, double s, const std::vector<double>& r_grid);

// residual of (-Delta)^s (d/dlambda U) = p U^{p-1} (d/dlambda U) at lambda=1,
// normalized by the smooth envelope (the dilation mode vanishes at r = 1)
double check_eigen_relation_dilation(int n, double s,
                                     const std::vector<double>& r_grid);

// min over a log grid r in [0, 1e3] of (-Delta)^s (1+r^2)^{-s} (1+r^2)^{2s}
double empirical_alpha(int n, double s);

}  // namespace fraclab::fraclap
