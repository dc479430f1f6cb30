#include "fraclab/weights.hpp"

#include "fraclab/fraclap.hpp"
#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fraclab::weights {

namespace {

double y_norm2(const WeightContext& ctx, std::size_t i, const Point& x) {
  const bubbles::Bubble& b = ctx.family.bubbles[i];
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = b.lambda * (x[k] - b.z[k]);
    d2 += t * t;
  }
  return d2;
}

// <y> = (1 + |y|^2)^{1/2}
double bracket(double y2) { return std::sqrt(1.0 + y2); }

double piece(const WeightContext& ctx, std::size_t i, int which,
             const Point& x, bool vee) {
  const Ambient& amb = ctx.family.ambient;
  const double n = amb.n, s = amb.s;
  const double lam = ctx.family.bubbles[i].lambda;
  const double y2 = y_norm2(ctx, i, x);
  const double y = std::sqrt(y2);
  const double br = bracket(y2);
  const double lam_pow =
      std::pow(lam, vee ? 0.5 * (n + 2.0 * s) : 0.5 * (n - 2.0 * s));
  if (which == 1) {
    if (y > ctx.R) return 0.0;
    const double pw = vee ? 4.0 * s : 2.0 * s;
    return lam_pow * std::pow(ctx.R, 2.0 * s - n) * std::pow(br, -pw);
  }
  if (which == 2) {
    if (y < 0.5 * ctx.R) return 0.0;
    const double pw = vee ? n - 2.0 * s : n - 4.0 * s;
    return lam_pow * std::pow(ctx.R, -4.0 * s) * std::pow(br, -pw);
  }
  throw std::invalid_argument("piece index must be 1 or 2");
}

}  // namespace

void WeightContext::validate() const {
  if (!(R > 1.0))
    throw std::invalid_argument("weight context requires R > 1");
  if (!(mu > 0.0 && mu < 0.5))
    throw std::invalid_argument("min-approximation parameter outside (0,1/2)");
  family.ambient.validate();
  if (family.bubbles.empty())
    throw std::invalid_argument("weight context needs a non-empty family");
}

WeightContext make_context(const BubbleFamily& family, double mu) {
  WeightContext ctx;
  ctx.family = family;
  ctx.mu = mu;
  ctx.R = bubbles::R_ij_and_R(family).R;
  ctx.validate();
  return ctx;
}

double w_piece(const WeightContext& ctx, std::size_t i, int which,
               const Point& x) {
  return piece(ctx, i, which, x, false);
}

double v_piece(const WeightContext& ctx, std::size_t i, int which,
               const Point& x) {
  return piece(ctx, i, which, x, true);
}

double eval_W(const WeightContext& ctx, const Point& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < ctx.family.bubbles.size(); ++i)
    v += w_piece(ctx, i, 1, x) + w_piece(ctx, i, 2, x);
  return v;
}

double eval_V(const WeightContext& ctx, const Point& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < ctx.family.bubbles.size(); ++i)
    v += v_piece(ctx, i, 1, x) + v_piece(ctx, i, 2, x);
  return v;
}

double F_min_approx(double a, double b, double mu) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("min approximation needs non-negative inputs");
  if (!(mu > 0.0 && mu < 0.5))
    throw std::invalid_argument("min-approximation parameter outside (0,1/2)");
  const double h = 0.5 * (a - b);
  return 0.5 * (a + b) - std::sqrt(h * h + mu * a * b);
}

double eval_tilde_W(const WeightContext& ctx, const std::vector<int>& J,
                    int i0, const Point& x) {
  const Ambient& amb = ctx.family.ambient;
  const double n = amb.n, s = amb.s;
  double total = w_piece(ctx, i0, 1, x);
  for (int j : J) {
    const double lam = ctx.family.bubbles[j].lambda;
    const double br = bracket(y_norm2(ctx, j, x));
    const double a = std::pow(ctx.R, 2.0 * s - n) * std::pow(br, -2.0 * s);
    const double b = std::pow(ctx.R, -4.0 * s) * std::pow(br, 4.0 * s - n);
    total += std::pow(lam, 0.5 * (n - 2.0 * s)) * F_min_approx(a, b, ctx.mu);
  }
  return total;
}

double eval_tilde_V(const WeightContext& ctx, const std::vector<int>& J,
                    int i0, const Point& x) {
  const Ambient& amb = ctx.family.ambient;
  const double n = amb.n, s = amb.s;
  double total = v_piece(ctx, i0, 1, x);
  for (int j : J) {
    const double lam = ctx.family.bubbles[j].lambda;
    const double br = bracket(y_norm2(ctx, j, x));
    const double a = std::pow(ctx.R, 2.0 * s - n) * std::pow(br, -4.0 * s);
    const double b = std::pow(ctx.R, -4.0 * s) * std::pow(br, 2.0 * s - n);
    total += std::pow(lam, 0.5 * (n + 2.0 * s)) * F_min_approx(a, b, ctx.mu);
  }
  return total;
}

std::vector<Point> structured_grid(const WeightContext& ctx, int per_decade) {
  const int n = ctx.family.ambient.n;
  // fixed angular design: coordinate axes and all +-1 diagonals
  std::vector<Point> dirs;
  for (int k = 0; k < n; ++k)
    for (double sgn : {1.0, -1.0}) {
      Point d(n, 0.0);
      d[k] = sgn;
      dirs.push_back(d);
    }
  const int combos = 1 << n;
  for (int mask = 0; mask < combos; ++mask) {
    Point d(n);
    for (int k = 0; k < n; ++k)
      d[k] = (mask >> k & 1) ? 1.0 : -1.0;
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (double& c : d) c *= inv;
    dirs.push_back(d);
  }

  const double t_min = 1e-2, t_max = 10.0 * ctx.R;
  const int decades = static_cast<int>(
      std::ceil(std::log10(t_max / t_min)));
  const int nr = std::max(2, per_decade * decades);
  std::vector<Point> grid;
  for (const bubbles::Bubble& b : ctx.family.bubbles) {
    grid.push_back(b.z);
    for (int k = 0; k <= nr; ++k) {
      const double t =
          t_min * std::pow(t_max / t_min, static_cast<double>(k) / nr);
      const double r = t / b.lambda;
      for (const Point& d : dirs) {
        Point x = b.z;
        for (int c = 0; c < n; ++c) x[c] += r * d[c];
        grid.push_back(std::move(x));
      }
    }
  }
  // inter-center segments
  const auto& bs = ctx.family.bubbles;
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = i + 1; j < bs.size(); ++j)
      for (int k = 1; k < 2 * per_decade; ++k) {
        const double t = static_cast<double>(k) / (2.0 * per_decade);
        Point x(n);
        for (int c = 0; c < n; ++c)
          x[c] = (1.0 - t) * bs[i].z[c] + t * bs[j].z[c];
        grid.push_back(std::move(x));
      }
  return grid;
}

namespace {

SupResult sup_over_grid(const WeightContext& ctx,
                        const std::function<double(const Point&)>& ratio) {
  SupResult best;
  double prev = -1.0;
  for (int per_decade = 8; per_decade <= 64; per_decade *= 2) {
    const auto grid = structured_grid(ctx, per_decade);
    const auto vals = parallel_map(grid.size(), [&](std::size_t k) {
      return ratio(grid[k]);
    });
    SupResult cur;
    cur.samples = grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (vals[k] > cur.value) {
        cur.value = vals[k];
        cur.argmax = grid[k];
      }
    best = cur;
    if (prev >= 0.0 && std::abs(cur.value - prev) <= 0.01 * std::abs(cur.value))
      break;
    prev = cur.value;
  }
  return best;
}

}  // namespace

SupResult star_norm(const std::function<double(const Point&)>& phi,
                    const WeightContext& ctx) {
  ctx.validate();
  return sup_over_grid(ctx, [&](const Point& x) {
    const double w = eval_W(ctx, x);
    return w > 0.0 ? std::abs(phi(x)) / w : 0.0;
  });
}

SupResult doublestar_norm(const std::function<double(const Point&)>& h,
                          const WeightContext& ctx) {
  ctx.validate();
  return sup_over_grid(ctx, [&](const Point& x) {
    const double v = eval_V(ctx, x);
    return v > 0.0 ? std::abs(h(x)) / v : 0.0;
  });
}

SupResult verify_h_bound(const WeightContext& ctx) {
  ctx.validate();
  const Ambient& amb = ctx.family.ambient;
  const double p = amb.p();
  auto h = [&](const Point& x) {
    double sigma = 0.0, powers = 0.0;
    for (const bubbles::Bubble& b : ctx.family.bubbles) {
      const double u = bubbles::bubble_eval(amb, b, x);
      sigma += u;
      powers += std::pow(u, p);
    }
    return std::pow(sigma, p) - powers;
  };
  return doublestar_norm(h, ctx);
}

LaplaceReport verify_laplace_inequality(const Ambient& amb) {
  amb.validate();
  if (!(amb.n > 4.0 * amb.s))
    throw std::invalid_argument("requires n > 4s");
  LaplaceReport rep;
  rep.alpha = fraclap::empirical_alpha(amb.n, amb.s);
  // slow-decay pair: (-Delta)^s <y>^{-(n-4s)} >= c <y>^{-(n-2s)}
  const double rho = 0.5 * (amb.n - 4.0 * amb.s);
  double cmin = std::numeric_limits<double>::infinity();
  std::vector<double> rs{0.0};
  for (int k = 0; k <= 60; ++k)
    rs.push_back(1e-2 * std::pow(1e5, k / 60.0));
  for (double r : rs) {
    const double val = fraclap::fraclap_inverse_quadratic(amb.n, amb.s, rho, r);
    const double c = val * std::pow(1.0 + r * r, 0.5 * (amb.n - 2.0 * amb.s));
    cmin = std::min(cmin, c);
  }
  rep.companion = cmin;
  return rep;
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : checks) {
    j.push_back({{"inequality_id", c.id},
                 {"sup_ratio", c.sup_ratio},
                 {"argmax_point", c.argmax},
                 {"samples", c.samples},
                 {"vacuous", c.vacuous()}});
  }
  return j;
}

ComparisonReport verify_weight_comparisons(const WeightContext& ctx, double L,
                                           double eps_region) {
  ctx.validate();
  const Ambient& amb = ctx.family.ambient;
  const double p = amb.p();
  const std::size_t nu = ctx.family.bubbles.size();
  ComparisonReport rep;
  if (nu < 2) return rep;

  auto U = [&](std::size_t i, const Point& x) {
    return bubbles::bubble_eval(amb, ctx.family.bubbles[i], x);
  };
  auto wsum = [&](std::size_t i, const Point& x) {
    return w_piece(ctx, i, 1, x) + w_piece(ctx, i, 2, x);
  };
  auto vsum = [&](std::size_t i, const Point& x) {
    return v_piece(ctx, i, 1, x) + v_piece(ctx, i, 2, x);
  };
  auto ynorm = [&](std::size_t i, const Point& x) {
    return std::sqrt(y_norm2(ctx, i, x));
  };

  const auto grid = structured_grid(ctx, 16);

  auto sup_where = [&](const std::function<bool(const Point&)>& in_region,
                       const std::function<double(const Point&)>& ratio,
                       const std::string& id) {
    InequalityCheck chk;
    chk.id = id;
    const auto vals = parallel_map(grid.size(), [&](std::size_t k) {
      return in_region(grid[k]) ? ratio(grid[k]) : -1.0;
    });
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (vals[k] < 0.0) continue;
      ++chk.samples;
      if (vals[k] > chk.sup_ratio) {
        chk.sup_ratio = vals[k];
        chk.argmax = grid[k];
      }
    }
    rep.checks.push_back(std::move(chk));
  };

  // both-far region, one check per unordered pair
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i + 1; j < nu; ++j) {
      sup_where(
          [&](const Point& x) {
            return ynorm(i, x) >= L && ynorm(j, x) >= L;
          },
          [&](const Point& x) {
            double lhs = 0.0;
            for (std::size_t mm : {i, j})
              for (std::size_t ll : {i, j})
                lhs += std::pow(U(mm, x), p - 1.0) * wsum(ll, x);
            const double rhs = vsum(i, x) + vsum(j, x);
            return rhs > 0.0 ? lhs / rhs : 0.0;
          },
          "pair-far[" + std::to_string(i) + "," + std::to_string(j) + "]");
    }

  // near the center of a finer-scale partner of bubble i, seen from i's
  // frame, with the partner itself already far in its own frame
  for (std::size_t i = 0; i < nu; ++i) {
    std::vector<std::size_t> J;
    for (std::size_t j = 0; j < nu; ++j)
      if (j != i &&
          ctx.family.bubbles[j].lambda > ctx.family.bubbles[i].lambda)
        J.push_back(j);
    if (J.empty()) continue;
    auto in_core = [&, i, J](const Point& x) {
      if (ynorm(i, x) > L) return false;
      const double li = ctx.family.bubbles[i].lambda;
      bool near_partner = false;
      for (std::size_t j : J) {
        if (ynorm(j, x) < L) return false;
        double d2 = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
          const double t =
              li * (x[c] - ctx.family.bubbles[j].z[c]);
          d2 += t * t;
        }
        if (d2 <= eps_region * eps_region) near_partner = true;
      }
      return near_partner;
    };
    sup_where(
        in_core,
        [&, i, J](const Point& x) {
          double lhs = 0.0, rhs = 0.0;
          for (std::size_t j : J) {
            lhs += wsum(j, x);
            rhs += vsum(j, x);
          }
          lhs *= std::pow(U(i, x), p - 1.0);
          return rhs > 0.0 ? lhs / rhs : 0.0;
        },
        "core-self[" + std::to_string(i) + "]");
    sup_where(
        in_core,
        [&, i, J](const Point& x) {
          double lhs = 0.0, rhs = v_piece(ctx, i, 1, x);
          for (std::size_t j : J) {
            lhs += std::pow(U(j, x), p - 1.0);
            rhs += vsum(j, x);
          }
          lhs *= w_piece(ctx, i, 1, x);
          return rhs > 0.0 ? lhs / rhs : 0.0;
        },
        "core-cross[" + std::to_string(i) + "]");
  }
  return rep;
}

}  // namespace fraclab::weights
