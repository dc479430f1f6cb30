#pragma once

#include <stdexcept>

namespace fraclab::specfun {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gamma function on the real line. Throws std::domain_error at non-positive
// integers and std::overflow_error above the representable range (~171.6).
double gamma(double x);

// log|Gamma(x)| together with the sign of Gamma(x).
double lgamma_signed(double x, int& sign);

double beta(double a, double b);

// Parameters of the Gauss hypergeometric function 2F1(a,b;c;z).
struct HypParams {
  double a = 0, b = 0, c = 0;
  double z = 0;
};

// 2F1 on the real line for z <= 0 of any magnitude or |z| < 1.
// Series for small |z|, Pfaff-transformed series for moderate negative z,
// terminating Euler transformation when c-a or c-b is a non-positive
// integer, and the Euler integral representation for large negative z.
double hyp2f1(const HypParams& p);

// Zero count of 2F1(n/2+s, 2s, n/2; -r^2) on r in [0, inf):
// floor(s) + (1+S)/2 with S = sign(Gamma(-s)Gamma(2s)Gamma(n/2+s)Gamma(n/2-2s)).
// Requires s in (0,1) and n > 4s.
int hyp2f1_zero_count(int n, double s);

// Surface area of the unit sphere S^{n-1}.
double sphere_area(int n);

// int_0^pi sin^{n-2}(t) dt  (n >= 2).
double sin_power_integral(int n);

} // namespace fraclab::specfun
