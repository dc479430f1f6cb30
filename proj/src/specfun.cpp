#include "fraclab/specfun.hpp"

#include "fraclab/quadrature.hpp"

#include <cmath>

namespace fraclab::specfun {

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 1e-12 && std::abs(x - std::round(x)) < 1e-12;
}

// plain Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k
double series(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (long k = 0; k < 100000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw NonConvergence("2F1 series did not converge within term budget");
}

// series with b a non-positive integer: exact polynomial of degree -b
double terminating_series(double a, double b, double c, double z) {
  const long N = std::lround(-b);
  double term = 1.0, sum = 1.0;
  for (long k = 0; k < N; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
  }
  return sum;
}

// Euler integral representation, valid for c > b > 0, z < 1. The two
// endpoint singularities are absorbed by power substitutions u = t^b and
// v = (1-t)^{c-b}, each written in local variables so no cancellation
// occurs near the endpoints.
double euler_integral(double a, double b, double c, double z) {
  const double cb = c - b;
  const double pref = gamma(c) / (gamma(b) * gamma(cb));
  auto left = [=](double u) {  // u = t^b, t in (0, 1/2)
    const double t = std::pow(u, 1.0 / b);
    return std::pow(1.0 - t, cb - 1.0) * std::pow(1.0 - z * t, -a) / b;
  };
  auto right = [=](double v) {  // v = (1-t)^{c-b}, 1-t in (0, 1/2)
    const double w = std::pow(v, 1.0 / cb);
    return std::pow(1.0 - w, b - 1.0) *
           std::pow(1.0 - z + z * w, -a) / cb;
  };
  const double IA = quad::tanh_sinh(left, 0.0, std::pow(0.5, b), 1e-14);
  const double IB = quad::tanh_sinh(right, 0.0, std::pow(0.5, cb), 1e-14);
  return pref * (IA + IB);
}

}  // namespace

double gamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at non-positive integer");
  if (x > 171.62) throw std::overflow_error("gamma: argument too large");
  return std::tgamma(x);
}

double lgamma_signed(double x, int& sign) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at non-positive integer");
  if (x > 0) {
    sign = 1;
  } else {
    const long long k = static_cast<long long>(std::floor(x));
    sign = (k % 2 == 0) ? 1 : -1;
  }
  return std::lgamma(x);
}

double beta(double a, double b) {
  int sa, sb, sab;
  const double v = lgamma_signed(a, sa) + lgamma_signed(b, sb) -
                   lgamma_signed(a + b, sab);
  return sa * sb * sab * std::exp(v);
}

double hyp2f1(const HypParams& p) {
  double a = p.a, b = p.b, c = p.c;
  const double z = p.z;
  if (is_nonpositive_integer(c))
    throw std::domain_error("2F1: c must not be a non-positive integer");
  if (z >= 1.0) throw std::domain_error("2F1: argument must satisfy z < 1");
  if (z == 0.0) return 1.0;

  if (is_nonpositive_integer(a)) std::swap(a, b);
  if (is_nonpositive_integer(b)) return terminating_series(a, b, c, z);

  // Euler transformation: exact polynomial branch when c-a or c-b is a
  // non-positive integer
  if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
    double aa = c - a, bb = c - b;
    if (!is_nonpositive_integer(bb)) std::swap(aa, bb);
    return std::pow(1.0 - z, c - a - b) * terminating_series(aa, bb, c, z);
  }

  if (std::abs(z) <= 0.6) return series(a, b, c, z);
  if (z > 0.0) return series(a, b, c, z);  // 0.6 < z < 1: slow but convergent

  // z < -0.6: Pfaff map into [0,1)
  const double w = z / (z - 1.0);
  if (w <= 0.85) return std::pow(1.0 - z, -a) * series(a, c - b, c, w);

  // very large |z|: integral representation
  if (c > b && b > 0.0) return euler_integral(a, b, c, z);
  if (c > a && a > 0.0) return euler_integral(b, a, c, z);
  throw std::domain_error("2F1: parameters outside supported large-|z| range");
}

int hyp2f1_zero_count(int n, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("zero count: s must lie in (0,1)");
  if (!(n > 4.0 * s))
    throw std::domain_error("zero count: requires n > 4s");
  int s1, s2, s3, s4;
  lgamma_signed(-s, s1);
  lgamma_signed(2.0 * s, s2);
  lgamma_signed(n / 2.0 + s, s3);
  lgamma_signed(n / 2.0 - 2.0 * s, s4);
  const int S = s1 * s2 * s3 * s4;
  return static_cast<int>(std::floor(s)) + (1 + S) / 2;
}

double sphere_area(int n) {
  return 2.0 * std::pow(M_PI, n / 2.0) / gamma(n / 2.0);
}

double sin_power_integral(int n) {
  return std::sqrt(M_PI) * gamma((n - 1) / 2.0) / gamma(n / 2.0);
}

}  // namespace fraclab::specfun
