#include "fraclab/fraclap.hpp"

#include "fraclab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

namespace fraclab::fraclap {

namespace {

double clamp1(double x) { return std::max(-1.0, std::min(1.0, x)); }

// angular kernel int_theta0^pi (r^2 + rp^2 - 2 r rp cos t)^{-(n+2t)/2} sin^{n-2}t dt
double angular_kernel(int n, double t, double r, double rp, double theta0) {
  const double q = -(n + 2.0 * t) / 2.0;
  auto f = [=](double th) {
    const double d2 = r * r + rp * rp - 2.0 * r * rp * std::cos(th);
    return std::pow(d2, q) * std::pow(std::sin(th), n - 2);
  };
  if (theta0 >= M_PI) return 0.0;
  return quad::gk_adaptive(f, theta0, M_PI, 1e-300, 1e-10, 400);
}

// evaluation at the origin via the plain radial reduction
double at_origin(const RadialProfile& p, int n, double t,
                 const quad::QuadratureSpec& spec) {
  const double C = kernel_normalization(n, t);
  const double f0 = p.value(0.0);
  const double h = 1e-4;
  // Taylor window [0,h]: f(0)-f(u) ~ -d1(0) u - d2(0) u^2/2
  double window = -p.d2(0.0) / 2.0 * std::pow(h, 2.0 - 2.0 * t) / (2.0 - 2.0 * t);
  const double d10 = p.d1(0.0);
  if (d10 != 0.0 && std::abs(1.0 - 2.0 * t) > 1e-8)
    window -= d10 * std::pow(h, 1.0 - 2.0 * t) / (1.0 - 2.0 * t);

  const double Rc = 1e3 * std::max(1.0, p.breakpoints.empty()
                                            ? 1.0
                                            : p.breakpoints.back());
  auto g = [&](double u) {
    return (f0 - p.value(u)) * std::pow(u, -1.0 - 2.0 * t);
  };
  std::vector<double> bps = p.breakpoints;
  for (double e = 1.0; e < Rc; e *= 4.0) bps.push_back(e);
  const double body =
      quad::gk_segments(g, h, Rc, bps, spec.abs_tol, spec.rel_tol,
                        spec.max_refinements);
  const double beta = p.decay_exponent;
  const double tail = f0 * std::pow(Rc, -2.0 * t) / (2.0 * t) -
                      p.value(Rc) * std::pow(Rc, -2.0 * t) / (2.0 * t + beta);
  return C * specfun::sphere_area(n) * (window + body + tail);
}

}  // namespace

RadialProfile inverse_quadratic_profile(double rho) {
  RadialProfile p;
  p.value = [rho](double r) { return std::pow(1.0 + r * r, -rho); };
  p.d1 = [rho](double r) {
    return -2.0 * rho * r * std::pow(1.0 + r * r, -rho - 1.0);
  };
  p.d2 = [rho](double r) {
    const double u = 1.0 + r * r;
    return -2.0 * rho * std::pow(u, -rho - 1.0) +
           4.0 * rho * (rho + 1.0) * r * r * std::pow(u, -rho - 2.0);
  };
  p.decay_exponent = 2.0 * rho;
  return p;
}

double kernel_normalization(int n, double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("fractional order must lie in (0,1)");
  return std::pow(4.0, t) * specfun::gamma(n / 2.0 + t) /
         (std::pow(M_PI, n / 2.0) * std::abs(std::tgamma(-t)));
}

double fraclap_radial_numeric(const RadialProfile& p, int n, double t,
                              double r, const quad::QuadratureSpec& spec) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("fractional order must lie in (0,1)");
  if (r < 0.0) throw std::domain_error("radius must be non-negative");
  if (p.decay_exponent < 0.0)
    throw std::domain_error("profile must declare a non-negative decay exponent");
  if (r < 1e-12 && n >= 2) return at_origin(p, n, t, spec);

  const double C = kernel_normalization(n, t);
  const double h = std::max(1e-4, 1e-3 * r);
  const double fr = p.value(r);

  // removed-ball Taylor correction
  double lap;
  if (r < 1e-12)
    lap = n * p.d2(0.0);
  else
    lap = p.d2(r) + (n - 1) * p.d1(r) / r;
  const double ball = -lap * specfun::sphere_area(n) *
                      std::pow(h, 2.0 - 2.0 * t) /
                      (2.0 * n * (2.0 - 2.0 * t));

  const double Rc =
      std::max({1e3, 1e3 * r,
                p.breakpoints.empty() ? 0.0 : 4.0 * p.breakpoints.back()});

  std::function<double(double)> G;
  if (n == 1) {
    G = [&, h, r](double rp) {
      const double df = fr - p.value(rp);
      double k = 0.0;
      if (std::abs(rp - r) > h) k += std::pow(std::abs(rp - r), -1.0 - 2.0 * t);
      if (rp + r > h) k += std::pow(rp + r, -1.0 - 2.0 * t);
      return df * k;
    };
  } else {
    G = [&, h, r](double rp) {
      double theta0 = 0.0;
      if (std::abs(rp - r) < h && r > 0.0 && rp > 0.0)
        theta0 =
            std::acos(clamp1((r * r + rp * rp - h * h) / (2.0 * r * rp)));
      const double K = angular_kernel(n, t, r, rp, theta0);
      return (fr - p.value(rp)) * std::pow(rp, n - 1) * K;
    };
  }

  std::vector<double> bps = p.breakpoints;
  bps.insert(bps.end(), {r - h, r, r + h, 2.0 * r, 0.25, 1.0});
  for (double e = 4.0; e < Rc; e *= 4.0) bps.push_back(e);
  const double body = quad::gk_segments(G, 0.0, Rc, bps, spec.abs_tol,
                                        spec.rel_tol, spec.max_refinements);

  // tail: kernel ~ I_sin rp^{-(n+2t)}, profile ~ f(Rc)(Rc/rp)^beta
  const double beta = p.decay_exponent;
  const double tail_core = fr * std::pow(Rc, -2.0 * t) / (2.0 * t) -
                           p.value(Rc) * std::pow(Rc, -2.0 * t) /
                               (2.0 * t + beta);
  double result;
  if (n == 1) {
    result = C * (body + 2.0 * tail_core + ball);
  } else {
    const double omega_nm2 = specfun::sphere_area(n - 1);
    const double tail = specfun::sin_power_integral(n) * tail_core;
    result = C * (omega_nm2 * (body + tail) + ball);
  }
  return result;
}

namespace {

std::map<std::tuple<int, double, double>, double> g_prefactor_cache;
std::mutex g_prefactor_mutex;

}  // namespace

double inverse_quadratic_prefactor(int n, double t, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  const auto key = std::make_tuple(n, t, rho);
  {
    std::lock_guard<std::mutex> lock(g_prefactor_mutex);
    auto it = g_prefactor_cache.find(key);
    if (it != g_prefactor_cache.end()) return it->second;
  }
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-14;
  spec.rel_tol = 1e-12;
  const double K =
      fraclap_radial_numeric(inverse_quadratic_profile(rho), n, t, 0.0, spec);
  std::lock_guard<std::mutex> lock(g_prefactor_mutex);
  g_prefactor_cache[key] = K;
  return K;
}

double fraclap_inverse_quadratic(int n, double t, double rho, double r) {
  if (n < 1) throw std::domain_error("dimension must be positive");
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("fractional order must lie in (0,1)");
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  if (r < 0.0) throw std::domain_error("radius must be non-negative");
  const double K = inverse_quadratic_prefactor(n, t, rho);
  return K * specfun::hyp2f1(
                 {n / 2.0 + t, rho + t, n / 2.0, -r * r});
}

double bubble_normalization(int n, double s) {
  if (!(n > 2.0 * s)) throw std::domain_error("requires n > 2s");
  const double m = (n - 2.0 * s) / 2.0;
  const double Km = inverse_quadratic_prefactor(n, s, m);
  return std::pow(Km, (n - 2.0 * s) / (4.0 * s));
}

double check_bubble_pde(int n, double s, const std::vector<double>& r_grid) {
  const double m = (n - 2.0 * s) / 2.0;
  const double c = bubble_normalization(n, s);
  const double p = (n + 2.0 * s) / (n - 2.0 * s);
  double worst = 0.0;
  for (double r : r_grid) {
    const double lhs = c * fraclap_inverse_quadratic(n, s, m, r);
    const double rhs = std::pow(c, p) * std::pow(1.0 + r * r, -(n / 2.0 + s));
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

double check_eigen_relation_dilation(int n, double s,
                                     const std::vector<double>& r_grid) {
  const double m = (n - 2.0 * s) / 2.0;
  const double c = bubble_normalization(n, s);
  const double p = (n + 2.0 * s) / (n - 2.0 * s);
  // d/dlambda U at lambda=1: m c [2 (1+r^2)^{-m-1} - (1+r^2)^{-m}]
  double worst = 0.0;
  for (double r : r_grid) {
    const double u = 1.0 + r * r;
    const double lhs = m * c *
                       (2.0 * fraclap_inverse_quadratic(n, s, m + 1.0, r) -
                        fraclap_inverse_quadratic(n, s, m, r));
    const double dU = m * c * std::pow(u, -m - 1.0) * (1.0 - r * r);
    const double rhs = p * std::pow(c, p - 1.0) * std::pow(u, -2.0 * s) * dU;
    // envelope normalization: the mode vanishes at r = 1
    const double env =
        p * std::pow(c, p - 1.0) * m * c * std::pow(u, -2.0 * s - m);
    worst = std::max(worst, std::abs(lhs - rhs) / env);
  }
  return worst;
}

double empirical_alpha(int n, double s) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 60; ++i) {
    const double r = (i == 0) ? 0.0 : std::pow(10.0, -2.0 + 5.0 * (i - 1) / 59.0);
    const double v = fraclap_inverse_quadratic(n, s, s, r) *
                     std::pow(1.0 + r * r, 2.0 * s);
    best = std::min(best, v);
  }
  return best;
}

}  // namespace fraclab::fraclap
