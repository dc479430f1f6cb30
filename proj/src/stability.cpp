#include "fraclab/stability.hpp"

#include "fraclab/parallel.hpp"
#include "fraclab/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fraclab::stability {

namespace {

using bubbles::Bubble;
using bubbles::ZMode;
using fields::FunctionRepr;

double dist(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    d += t * t;
  }
  return std::sqrt(d);
}

std::vector<double> run_tasks(const std::vector<std::function<double()>>& t) {
  return parallel_map(t.size(),
                      [&](std::size_t i) { return t[i](); });
}

// least-squares line y = a + b x with coefficient of determination
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw std::invalid_argument("rate fit: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared =
      syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

}  // namespace

void CutoffSpec::validate() const {
  if (!(r_inner > 0.0) || !(r_outer > r_inner))
    throw std::invalid_argument("bump radii need 0 < r_inner < r_outer");
}

fraclap::RadialProfile build_cutoff(const CutoffSpec& cs) {
  cs.validate();
  const double r0 = cs.r_inner;
  const double R = cs.r_outer;
  const double logL = std::log(R / r0);
  fraclap::RadialProfile p;
  p.value = [=](double x) {
    if (x <= r0) return 1.0;
    if (x >= R) return 0.0;
    return std::log(R / x) / logL;
  };
  p.d1 = [=](double x) {
    return (x > r0 && x < R) ? -1.0 / (x * logL) : 0.0;
  };
  p.d2 = [=](double x) {
    return (x > r0 && x < R) ? 1.0 / (x * x * logL) : 0.0;
  };
  p.decay_exponent = 0.0;  // compactly supported
  p.breakpoints = {r0, R};
  return p;
}

appendix::RateFit verify_cutoff_gradient_bound(const Ambient& amb,
                                               const std::vector<double>& ratios,
                                               const QuadratureSpec& spec) {
  amb.validate();
  if (ratios.size() < 2)
    throw std::invalid_argument("ratio sweep needs at least two points");
  for (double L : ratios)
    if (!(L > 3.0))
      throw std::invalid_argument("ratios must exceed 3 (log ratio > 1)");

  const int n = amb.n;
  const double s = amb.s;
  const double power = n / s;

  QuadratureSpec inner = spec;
  inner.rel_tol = std::max(spec.rel_tol, 1e-6);
  inner.abs_tol = std::max(spec.abs_tol, 1e-10);
  QuadratureSpec outer = spec;
  outer.rel_tol = std::max(spec.rel_tol, 1e-5);
  outer.abs_tol = std::max(spec.abs_tol, 1e-9);

  const auto values = parallel_map(ratios.size(), [&](std::size_t i) {
    const double L = ratios[i];
    CutoffSpec cs;
    cs.center = Point(n, 0.0);
    cs.r_inner = 1.0;
    cs.r_outer = L;
    const auto phi = build_cutoff(cs);
    auto f = [&](double r) {
      const double v = fraclap::fraclap_radial_numeric(phi, n, 0.5 * s, r,
                                                       inner);
      return std::pow(std::abs(v), power);
    };
    return quad::integrate_radial(f, n, (n + s) * power, outer,
                                  {0.5, 1.0, std::sqrt(L), L, 2.0 * L});
  });

  // envelope constant from the closed-form local model in the annulus:
  // (-Delta)^{s/2} phi ~ C_log r^{-s} / log(R/r)
  const double t = 0.5 * s;
  const double c_log = std::pow(4.0, t) * std::tgamma(t) *
                       std::tgamma(0.5 * n) /
                       (2.0 * std::tgamma(0.5 * (n - 2.0 * t)));
  const double area = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
  const double A = area * std::pow(c_log, power);

  // certified one-sided exponent: smallest b with value <= A (log L)^b
  std::vector<double> lx, ly;
  appendix::RateFit fit;
  double b_os = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(values[i] > 0.0))
      throw std::runtime_error("bump sweep produced a non-positive integral");
    const double x = std::log(ratios[i]);
    fit.samples.emplace_back(x, values[i]);
    b_os = std::max(b_os, std::log(values[i] / A) / std::log(x));
    lx.push_back(std::log(x));
    ly.push_back(std::log(values[i]));
  }
  fit.fitted_exponent = b_os;
  fit.log_factor_detected = false;
  fit.r_squared = fit_line(lx, ly).r_squared;
  return fit;
}

std::vector<double> spectral_gap_radial(const Ambient& amb, int basis_size,
                                        const QuadratureSpec& spec) {
  amb.validate();
  if (basis_size < 4)
    throw std::invalid_argument("Galerkin basis needs at least four elements");
  const int n = amb.n;
  const double s = amb.s;
  const double m = amb.m();
  const int K = basis_size;
  const double c = bubbles::normalization_constant(amb);
  const double cp1 = std::pow(c, amb.p() - 1.0);

  // mass matrix in closed form:
  // int_{R^n} (1+r^2)^{-a} dx = pi^{n/2} Gamma(a - n/2) / Gamma(a)
  Eigen::MatrixXd B(K, K);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) {
      const double a = 2.0 * s + 2.0 * m + k + l;
      B(k, l) = cp1 * std::pow(M_PI, 0.5 * n) *
                std::tgamma(a - 0.5 * n) / std::tgamma(a);
    }

  // stiffness entries by radial quadrature of the closed-form transforms
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k < K; ++k)
    for (int l = k; l < K; ++l) idx.emplace_back(k, l);
  const auto entries = parallel_map(idx.size(), [&](std::size_t t) {
    const auto [k, l] = idx[t];
    const double rho = m + k;
    auto f = [&](double r) {
      return fraclap::fraclap_inverse_quadratic(n, s, rho, r) *
             std::pow(1.0 + r * r, -(m + l));
    };
    const double decay =
        std::min(2.0 * rho + 2.0 * s, n + 2.0 * s) + 2.0 * (m + l);
    return quad::integrate_radial(f, n, decay, spec);
  });
  Eigen::MatrixXd A(K, K);
  for (std::size_t t = 0; t < idx.size(); ++t) {
    A(idx[t].first, idx[t].second) = entries[t];
    A(idx[t].second, idx[t].first) = entries[t];
  }

  // diagonal scaling before the generalized solve
  Eigen::VectorXd d(K);
  for (int k = 0; k < K; ++k) d(k) = 1.0 / std::sqrt(B(k, k));
  const Eigen::MatrixXd As = d.asDiagonal() * A * d.asDiagonal();
  const Eigen::MatrixXd Bs = d.asDiagonal() * B * d.asDiagonal();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bspec(Bs);
  if (bspec.info() != Eigen::Success ||
      bspec.eigenvalues().minCoeff() <
          1e-13 * bspec.eigenvalues().maxCoeff())
    throw std::runtime_error(
        "Galerkin mass matrix numerically singular; use a smaller basis");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(As, Bs);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized eigenvalue solve failed");
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + K);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double deficit(const fields::FunctionRepr& u, const QuadratureSpec& spec) {
  const Ambient amb = u.ambient;
  amb.validate();
  if (u.bubble_terms.empty())
    throw std::invalid_argument("deficit needs at least one bubble term");
  const double p = amb.p();

  auto F = [u, p](const Point& x) {
    const double v = u.eval(x);
    const double sgn = v >= 0.0 ? 1.0 : -1.0;
    return u.eval_fraclap(x) - sgn * std::pow(std::abs(v), p);
  };

  fields::PointwiseField f;
  f.eval = F;
  f.decay = amb.n + 2.0 * amb.s;
  for (const auto& [coef, b] : u.bubble_terms) {
    (void)coef;
    f.carriers.push_back(b);
  }

  const Point z0 = u.bubble_terms.front().second.z;
  bool radial = true;
  for (const auto& [coef, b] : u.bubble_terms)
    if (dist(b.z, z0) > 1e-13 * (1.0 + dist(z0, Point(amb.n, 0.0))))
      radial = false;
  for (const auto& [coef, zm] : u.z_terms)
    if (zm.a != amb.n + 1) radial = false;

  if (radial) {
    f.radial = [F, z0](double r) {
      Point x = z0;
      x[0] += r;
      return F(x);
    };
    for (const auto& [coef, b] : u.bubble_terms)
      f.radial_breaks.push_back(1.0 / b.lambda);
  } else {
    // The residual of a multi-center sum carries most of its dual-norm mass
    // in the overlap region between the cores. Pad the sampling mixture
    // with a geometric ladder of wider carriers bridging each pair.
    const auto& terms = u.bubble_terms;
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        const Bubble& a = terms[i].second;
        const Bubble& b = terms[j].second;
        const double dij = dist(a.z, b.z);
        if (!(dij > 0.0)) continue;
        Point mid(amb.n);
        for (int k = 0; k < amb.n; ++k) mid[k] = 0.5 * (a.z[k] + b.z[k]);
        const double lam_far = 2.0 / dij;
        f.carriers.push_back({mid, lam_far});
        for (const Bubble* c : {&a, &b})
          for (double lam = c->lambda / 4.0; lam > lam_far; lam /= 4.0)
            f.carriers.push_back({c->z, lam});
      }
  }
  return fields::neg_sobolev_norm(f, amb, spec);
}

std::vector<DeficitReport> q_gamma_sweep(const Ambient& amb, PairKind mode,
                                         const std::vector<double>& separations,
                                         const QuadratureSpec& spec) {
  amb.validate();
  if (separations.empty())
    throw std::invalid_argument("separation sweep is empty");

  std::vector<BubbleFamily> families;
  for (double sep : separations) {
    if (!(sep > 0.0))
      throw std::invalid_argument("separations must be positive");
    BubbleFamily fam;
    fam.ambient = amb;
    if (mode == PairKind::Cluster) {
      fam.bubbles.push_back({Point(amb.n, 0.0), 1.0});
      Point z2(amb.n, 0.0);
      z2[0] = sep;
      fam.bubbles.push_back({z2, 1.0});
    } else {
      fam.bubbles.push_back({Point(amb.n, 0.0), sep});
      fam.bubbles.push_back({Point(amb.n, 0.0), 1.0});
    }
    if (!bubbles::is_delta_interacting(fam, 0.01))
      throw std::invalid_argument(
          "family interacts too strongly for the sweep (Q > 0.01)");
    families.push_back(std::move(fam));
  }

  const double tol = 1e-9;
  const Regime regime = std::abs(amb.n - 6.0 * amb.s) <= tol
                            ? Regime::Log
                            : (amb.n < 6.0 * amb.s ? Regime::Linear
                                                   : Regime::Power);
  auto base = [&](double g) {
    switch (regime) {
      case Regime::Linear:
        return g;
      case Regime::Log:
        return g * std::sqrt(std::abs(std::log(g)));
      case Regime::Power:
        return std::pow(g, 0.5 * amb.p());
    }
    return g;
  };

  std::vector<DeficitReport> reports(families.size());
  for (std::size_t i = 0; i < families.size(); ++i) {
    reports[i].q = bubbles::family_Q(families[i]);
    reports[i].gamma = deficit(fields::from_family(families[i]), spec);
    reports[i].regime = regime;
  }
  double cmax = 0.0;
  for (const auto& r : reports) cmax = std::max(cmax, r.q / base(r.gamma));
  for (auto& r : reports) r.rhs = cmax * base(r.gamma);
  return reports;
}

namespace {

FunctionRepr bubble_repr(const Ambient& amb, const Bubble& b) {
  FunctionRepr f;
  f.ambient = amb;
  f.bubble_terms.emplace_back(1.0, b);
  return f;
}

FunctionRepr mode_repr(const Ambient& amb, const Bubble& b, int a) {
  FunctionRepr f;
  f.ambient = amb;
  f.bubble_terms.emplace_back(0.0, b);
  f.z_terms.emplace_back(1.0, ZMode{0, a});
  return f;
}

struct ManifoldState {
  std::vector<Bubble> bubbles;
  Eigen::MatrixXd G;      // bubble Gram
  Eigen::VectorXd b;      // <U_i, u>
  Eigen::VectorXd alpha;
  double objective = std::numeric_limits<double>::infinity();
  bool rank_deficient = false;
};

}  // namespace

ProjectionResult project_to_manifold(const fields::FunctionRepr& u, int nu,
                                     const BubbleFamily& init,
                                     bool with_alphas,
                                     const QuadratureSpec& spec) {
  const Ambient amb = u.ambient;
  amb.validate();
  if (nu < 1) throw std::invalid_argument("need at least one bubble");
  if (static_cast<int>(init.bubbles.size()) != nu)
    throw std::invalid_argument("initial family size does not match nu");
  const int n = amb.n;
  const int dim = nu * (n + 1);

  QuadratureSpec search = spec;
  search.rel_tol = std::max(spec.rel_tol, 1e-9);
  search.abs_tol = std::max(spec.abs_tol, 1e-13);

  const double uu = fields::hs_inner(u, u, spec);

  auto evaluate = [&](const std::vector<Bubble>& bs,
                      const QuadratureSpec& qs) {
    ManifoldState st;
    st.bubbles = bs;
    std::vector<std::function<double()>> tasks;
    std::vector<std::pair<int, int>> gidx;
    for (int i = 0; i < nu; ++i)
      for (int j = i; j < nu; ++j) {
        gidx.emplace_back(i, j);
        tasks.push_back([&, i, j] {
          return fields::hs_inner(bubble_repr(amb, bs[i]),
                                  bubble_repr(amb, bs[j]), qs);
        });
      }
    for (int i = 0; i < nu; ++i)
      tasks.push_back(
          [&, i] { return fields::hs_inner(bubble_repr(amb, bs[i]), u, qs); });
    const auto vals = run_tasks(tasks);
    st.G.resize(nu, nu);
    st.b.resize(nu);
    for (std::size_t t = 0; t < gidx.size(); ++t) {
      st.G(gidx[t].first, gidx[t].second) = vals[t];
      st.G(gidx[t].second, gidx[t].first) = vals[t];
    }
    for (int i = 0; i < nu; ++i) st.b(i) = vals[gidx.size() + i];

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.G);
    if (es.eigenvalues().minCoeff() <=
        1e-10 * std::max(es.eigenvalues().maxCoeff(), 0.0)) {
      st.rank_deficient = true;
      return st;
    }
    st.alpha = with_alphas ? st.G.llt().solve(st.b).eval()
                           : Eigen::VectorXd::Ones(nu).eval();
    st.objective = uu - 2.0 * st.alpha.dot(st.b) +
                   st.alpha.dot(st.G * st.alpha);
    return st;
  };

  auto apply_step = [&](const std::vector<Bubble>& bs,
                        const Eigen::VectorXd& delta) {
    std::vector<Bubble> out = bs;
    for (int i = 0; i < nu; ++i) {
      for (int a = 0; a < n; ++a) out[i].z[a] += delta(i * (n + 1) + a);
      out[i].lambda *= std::exp(delta(i * (n + 1) + n));
    }
    return out;
  };

  // <rho, phi> for every derivative mode, with rho = u - sum alpha_j U_j
  auto mode_inners = [&](const ManifoldState& st, const QuadratureSpec& qs) {
    std::vector<std::function<double()>> tasks;
    for (int i = 0; i < nu; ++i)
      for (int a = 1; a <= n + 1; ++a) {
        tasks.push_back([&, i, a] {
          const FunctionRepr z = mode_repr(amb, st.bubbles[i], a);
          double v = fields::hs_inner(z, u, qs);
          for (int j = 0; j < nu; ++j)
            v -= st.alpha(j) *
                 fields::hs_inner(z, bubble_repr(amb, st.bubbles[j]), qs);
          return v;
        });
      }
    const auto vals = run_tasks(tasks);
    Eigen::VectorXd out(dim);
    for (int k = 0; k < dim; ++k) out(k) = vals[k];
    return out;
  };

  auto gradient_from = [&](const ManifoldState& st,
                           const Eigen::VectorXd& rz) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < nu; ++i) {
      const double lam = st.bubbles[i].lambda;
      for (int a = 0; a < n; ++a)
        g(i * (n + 1) + a) = -2.0 * st.alpha(i) * lam * rz(i * (n + 1) + a);
      g(i * (n + 1) + n) = -2.0 * st.alpha(i) * rz(i * (n + 1) + n);
    }
    return g;
  };

  // Gauss-Newton model Hessian from the derivative-mode Gram matrix
  auto model_hessian = [&](const ManifoldState& st, const QuadratureSpec& qs) {
    std::vector<std::function<double()>> tasks;
    std::vector<std::pair<int, int>> hidx;
    for (int k = 0; k < dim; ++k)
      for (int l = k; l < dim; ++l) {
        hidx.emplace_back(k, l);
        tasks.push_back([&, k, l] {
          const int ik = k / (n + 1), ak = k % (n + 1) + 1;
          const int il = l / (n + 1), al = l % (n + 1) + 1;
          return fields::hs_inner(mode_repr(amb, st.bubbles[ik], ak),
                                  mode_repr(amb, st.bubbles[il], al), qs);
        });
      }
    const auto vals = run_tasks(tasks);
    Eigen::MatrixXd H(dim, dim);
    for (std::size_t t = 0; t < hidx.size(); ++t) {
      const int k = hidx[t].first, l = hidx[t].second;
      const int ik = k / (n + 1), ak = k % (n + 1);
      const int il = l / (n + 1), al = l % (n + 1);
      double ck = st.alpha(ik), cl = st.alpha(il);
      if (ak < n) ck *= st.bubbles[ik].lambda;
      if (al < n) cl *= st.bubbles[il].lambda;
      H(k, l) = 2.0 * ck * cl * vals[t];
      H(l, k) = H(k, l);
    }
    return H;
  };

  ProjectionResult res;
  ManifoldState cur = evaluate(init.bubbles, search);
  if (cur.rank_deficient)
    throw RankDeficientError(
        "initial bubble configuration is numerically degenerate");
  res.objective_trace.push_back(cur.objective);

  const int max_iter = 40;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd rz = mode_inners(cur, search);
    const Eigen::VectorXd g = gradient_from(cur, rz);
    if (g.lpNorm<Eigen::Infinity>() <= 1e-10 * std::max(1.0, uu)) break;

    const Eigen::MatrixXd H = model_hessian(cur, search);
    Eigen::VectorXd delta = Eigen::LDLT<Eigen::MatrixXd>(H).solve(-g);
    if (!delta.allFinite() || delta.dot(g) >= 0.0)
      delta = -g / std::max(H.diagonal().maxCoeff(), 1e-12);
    // keep individual moves bounded relative to the bubble scales
    const double maxstep = delta.lpNorm<Eigen::Infinity>();
    if (maxstep > 1.0) delta *= 1.0 / maxstep;

    double t = 1.0;
    ManifoldState next;
    bool accepted = false;
    while (t > 1e-12) {
      next = evaluate(apply_step(cur.bubbles, t * delta), search);
      if (!next.rank_deficient &&
          next.objective <=
              cur.objective + 1e-4 * t * delta.dot(g) +
                  1e-14 * std::max(1.0, std::abs(cur.objective))) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    cur = next;
    res.iterations = it + 1;
    res.objective_trace.push_back(
        std::min(cur.objective, res.objective_trace.back()));
  }

  // final evaluation and orthogonality report at the requested accuracy
  cur = evaluate(cur.bubbles, spec);
  if (cur.rank_deficient)
    throw RankDeficientError(
        "projected bubble configuration is numerically degenerate");
  const Eigen::VectorXd rz = mode_inners(cur, spec);
  const Eigen::VectorXd rU = cur.b - cur.G * cur.alpha;

  res.bubbles.ambient = amb;
  res.bubbles.bubbles = cur.bubbles;
  if (with_alphas)
    res.bubbles.alphas.assign(cur.alpha.data(), cur.alpha.data() + nu);
  res.residual_norm = std::sqrt(std::max(cur.objective, 0.0));
  double worst = 0.0;
  for (int i = 0; i < nu; ++i) {
    res.ortho_residuals.push_back(std::abs(rU(i)));
    worst = std::max(worst, std::abs(rU(i)));
    for (int a = 0; a < n + 1; ++a) {
      const double v = std::abs(rz(i * (n + 1) + a));
      res.ortho_residuals.push_back(v);
      worst = std::max(worst, v);
    }
  }
  res.converged = worst <= 1e-6 * std::max(1.0, std::sqrt(uu));
  res.objective_trace.push_back(
      std::min(cur.objective, res.objective_trace.back()));
  return res;
}

}  // namespace fraclab::stability
