#include "fraclab/quadrature.hpp"

#include "fraclab/parallel.hpp"
#include "fraclab/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace fraclab::quad {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1], positive half.
constexpr double kr_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kr_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss weights for nodes 1,3,5,7 of the Kronrod set.
constexpr double g_weights[4] = {0.129484966168870, 0.279705391489277,
                                 0.381830050505119, 0.417959183673469};

struct Segment {
  double a, b, val, err;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fk = 0.0, fg = 0.0;
  const double f0 = f(c);
  fk += kr_weights[7] * f0;
  fg += g_weights[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double v = f(c - h * kr_nodes[i]) + f(c + h * kr_nodes[i]);
    fk += kr_weights[i] * v;
    if (i % 2 == 1) fg += g_weights[i / 2] * v;
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.val = fk * h;
  s.err = std::abs((fk - fg) * h);
  return s;
}

double adaptive(const std::function<double(double)>& f,
                std::vector<Segment> segs, double abs_tol, double rel_tol,
                int max_intervals) {
  while (static_cast<int>(segs.size()) < max_intervals) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].val;
      err += segs[i].err;
      if (segs[i].err > worst_err) {
        worst_err = segs[i].err;
        worst = i;
      }
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) return total;  // interval exhausted
    segs[worst] = gk15(f, s.a, mid);
    segs.push_back(gk15(f, mid, s.b));
  }
  double total = 0.0, err = 0.0;
  for (const auto& s : segs) {
    total += s.val;
    err += s.err;
  }
  if (err > 100.0 * std::max(abs_tol, rel_tol * std::abs(total)))
    throw QuadratureError("adaptive quadrature failed to converge");
  return total;
}

}  // namespace

double gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, double rel_tol, int max_intervals) {
  if (a == b) return 0.0;
  return adaptive(f, {gk15(f, a, b)}, abs_tol, rel_tol, max_intervals);
}

double gk_segments(const std::function<double(double)>& f, double a, double b,
                   const std::vector<double>& breakpoints, double abs_tol,
                   double rel_tol, int max_intervals) {
  if (a == b) return 0.0;
  std::vector<double> pts{a};
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    segs.push_back(gk15(f, pts[i], pts[i + 1]));
  return adaptive(f, std::move(segs), abs_tol, rel_tol, max_intervals);
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  constexpr double pi_half = 1.5707963267948966;
  // terms at t = +-k*h; x written as offset from the nearer endpoint so that
  // endpoint singularities are sampled accurately
  auto level_sum = [&](double h, bool odd_only) {
    double s = 0.0;
    const int step = odd_only ? 2 : 1;
    const int start = odd_only ? 1 : 0;
    for (int k = start;; k += step) {
      const double t = k * h;
      if (t > 6.0) break;
      const double y = pi_half * std::sinh(t);
      const double w = pi_half * std::cosh(t) / std::pow(std::cosh(y), 2);
      const double om = 2.0 / (std::exp(2.0 * y) + 1.0);  // 1 - tanh(y)
      if (half * om <= 0.0 || w < 1e-290) break;
      double term = w * f(b - half * om);
      if (k > 0) term += w * f(a + half * om);
      if (!std::isfinite(term)) term = 0.0;
      s += term;
    }
    return s;
  };
  double h = 0.5;
  double sum = level_sum(h, false);
  double result = h * sum * half;
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    sum += level_sum(h, true);
    const double next = h * sum * half;
    if (level >= 2 && std::abs(next - result) <= tol * std::abs(next)) {
      return next;
    }
    result = next;
  }
  return result;
}

double integrate_radial(const std::function<double(double)>& f, int n,
                        double decay, const QuadratureSpec& spec,
                        std::vector<double> breakpoints) {
  if (!(decay > n + 0.05))
    throw QuadratureError("integrate_radial: tail decay too slow");
  auto F = [&](double r) { return f(r) * std::pow(r, n - 1); };

  std::vector<double> edges{0.0, 0.25, 1.0};
  double T = 1e4;
  for (double p : breakpoints) {
    if (p > 0.0 && std::isfinite(p)) {
      edges.push_back(p);
      T = std::max(T, 8.0 * p);
    }
  }
  for (double g = 4.0; g < T; g *= 4.0) edges.push_back(g);
  edges.push_back(T);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  while (edges.back() > T) edges.pop_back();
  if (edges.back() < T) edges.push_back(T);

  double body = 0.0;
  {
    const double atol = spec.abs_tol / static_cast<double>(edges.size());
    std::vector<double> parts = parallel_map(edges.size() - 1, [&](std::size_t i) {
      return gk_adaptive(F, edges[i], edges[i + 1], atol, 0.2 * spec.rel_tol,
                         spec.max_refinements);
    });
    for (double v : parts) body += v;
  }

  // analytic power tail, exponent refitted from the integrand itself
  double tail = 0.0;
  for (int attempt = 0;; ++attempt) {
    const double fT = f(T), f2T = f(2.0 * T);
    if (fT == 0.0) break;
    double g = decay;
    if (f2T != 0.0 && fT * f2T > 0.0)
      g = std::log(std::abs(fT / f2T)) / std::log(2.0);
    if (g > n + 0.05) {
      tail = fT * std::pow(T, n) / (g - n);
      break;
    }
    if (attempt >= 6) throw QuadratureError("integrate_radial: tail misfit");
    const double Tn = 8.0 * T;
    body += gk_adaptive(F, T, Tn, spec.abs_tol, 0.2 * spec.rel_tol,
                        spec.max_refinements);
    T = Tn;
  }
  return specfun::sphere_area(n) * (body + tail);
}

}  // namespace fraclab::quad
