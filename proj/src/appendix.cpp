#include "fraclab/appendix.hpp"

#include "fraclab/fields.hpp"
#include "fraclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <stdexcept>

namespace fraclab::appendix {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ss_res = 0.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const double N = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = N * sxx - sx * sx;
  if (den <= 0.0)
    throw std::invalid_argument("rate fit: degenerate abscissa design");
  LineFit f;
  f.slope = (N * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / N;
  for (std::size_t k = 0; k < x.size(); ++k)
    f.ss_res += std::pow(y[k] - f.slope * x[k] - f.intercept, 2);
  return f;
}

double sqr(double v) { return v * v; }

// sqrt(1 + |y|^2) with y = lambda r
double ang(double lam, double r) {
  return std::sqrt(1.0 + lam * lam * r * r);
}

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4)
    throw std::invalid_argument("rate fit needs at least 4 samples");
  double rmin = 1e300, rmax = 0.0;
  for (const auto& [R, v] : samples) {
    if (!(R > 0.0) || !(v > 0.0) || !std::isfinite(R) || !std::isfinite(v))
      throw std::invalid_argument("rate fit needs positive finite samples");
    rmin = std::min(rmin, R);
    rmax = std::max(rmax, R);
  }
  if (rmax < 100.0 * rmin * (1.0 - 1e-9))
    throw std::invalid_argument("rate fit needs two decades of abscissa");

  std::vector<double> x, y;
  for (const auto& [R, v] : samples) {
    x.push_back(std::log(R));
    y.push_back(std::log(v));
  }
  const LineFit pow_fit = least_squares(x, y);

  bool have_log = rmin > 1.0 + 1e-7;
  LineFit log_fit;
  if (have_log) {
    std::vector<double> y2 = y;
    for (std::size_t k = 0; k < y2.size(); ++k)
      y2[k] -= std::log(std::log(samples[k].first));
    log_fit = least_squares(x, y2);
  }

  RateFit out;
  out.samples = samples;
  out.log_factor_detected = have_log && 10.0 * log_fit.ss_res <= pow_fit.ss_res;
  const LineFit& chosen = out.log_factor_detected ? log_fit : pow_fit;
  out.fitted_exponent = chosen.slope;

  // coefficient of determination against the raw log values
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    double pred = chosen.slope * x[k] + chosen.intercept;
    if (out.log_factor_detected) pred += std::log(std::log(samples[k].first));
    ss_tot += sqr(y[k] - ybar);
    ss_res += sqr(y[k] - pred);
  }
  out.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                               : 1.0;
  return out;
}

double gram_A5(const Ambient& amb, const BubbleFamily& family, int i, int j,
               int a, int b, const QuadratureSpec& spec) {
  amb.validate();
  const int nb = static_cast<int>(family.bubbles.size());
  if (i < 0 || i >= nb || j < 0 || j >= nb)
    throw std::invalid_argument("bubble index out of range");
  if (a < 1 || a > amb.n + 1 || b < 1 || b > amb.n + 1)
    throw std::invalid_argument("derivative mode index out of range");
  fields::FunctionRepr u, v;
  u.ambient = v.ambient = amb;
  u.bubble_terms.emplace_back(0.0, family.bubbles[i]);
  u.z_terms.emplace_back(1.0, bubbles::ZMode{0, a});
  v.bubble_terms.emplace_back(0.0, family.bubbles[j]);
  v.z_terms.emplace_back(1.0, bubbles::ZMode{0, b});
  // <Z_i^a, Z_j^b>_{Hdot^s} = p int U_i^{p-1} Z_i^a Z_j^b
  return fields::hs_inner(u, v, spec) / amb.p();
}

double interaction_integral(const Ambient& amb, const Bubble& b1,
                            const Bubble& b2, const QuadratureSpec& spec) {
  amb.validate();
  const double p = amb.p();
  auto g = [&](double r1, double r2) {
    return std::pow(bubbles::bubble_radial(amb, b1.lambda, r1), p) *
           bubbles::bubble_radial(amb, b2.lambda, r2);
  };
  return fields::integrate_two_center(g, b1, b2, spec);
}

RateFit interaction_asymptotics(const Ambient& amb, PairKind mode,
                                const std::vector<double>& R_grid,
                                const QuadratureSpec& spec) {
  amb.validate();
  if (R_grid.size() < 4)
    throw std::invalid_argument("interaction sweep needs at least 4 points");
  std::vector<std::pair<Bubble, Bubble>> pairs;
  for (double g : R_grid) {
    Bubble b1{bubbles::Point(amb.n, 0.0), 1.0};
    Bubble b2{bubbles::Point(amb.n, 0.0), 1.0};
    if (mode == PairKind::Cluster) {
      b2.z[0] = g;
    } else {
      b1.lambda = g;
    }
    pairs.emplace_back(std::move(b1), std::move(b2));
  }
  const auto values = parallel_map(pairs.size(), [&](std::size_t k) {
    return interaction_integral(amb, pairs[k].first, pairs[k].second, spec);
  });
  std::vector<std::pair<double, double>> samples;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    samples.push_back(
        {bubbles::q_ij(amb, pairs[k].first, pairs[k].second), values[k]});
  return fit_rate(samples);
}

BubbleFamily family_for_target(const Ambient& amb, const BubbleFamily& tmpl,
                               double R) {
  amb.validate();
  if (tmpl.bubbles.size() < 2)
    throw std::invalid_argument("sweep template needs two bubbles");
  if (!(R > 1.0)) throw std::invalid_argument("sweep parameter must exceed 1");
  const double l1 = tmpl.bubbles[0].lambda, l2 = tmpl.bubbles[1].lambda;
  BubbleFamily f;
  f.ambient = amb;
  if (bubbles::classify_pair(tmpl, 0, 1) == PairKind::Cluster) {
    const double mu = std::sqrt(l1 * l2);
    bubbles::Point z2(amb.n, 0.0);
    z2[0] = 2.0 * R / mu;
    f.bubbles.push_back({bubbles::Point(amb.n, 0.0), mu});
    f.bubbles.push_back({z2, mu});
  } else {
    const double mu = std::min(l1, l2);
    f.bubbles.push_back({bubbles::Point(amb.n, 0.0), 4.0 * R * R * mu});
    f.bubbles.push_back({bubbles::Point(amb.n, 0.0), mu});
  }
  return f;
}

namespace {

// the four weight-piece radial profiles, as functions of the distance to
// the corresponding center; outer indicators follow the printed regions
// (|y| >= R)
struct RowContext {
  Ambient amb;
  BubbleFamily fam;
  double R = 0.0;

  double l(int i) const { return fam.bubbles[i].lambda; }
  double w1(int i, double r) const {
    const double lam = l(i), n = amb.n, s = amb.s;
    if (lam * r > R) return 0.0;
    return std::pow(lam, 0.5 * (n - 2.0 * s)) * std::pow(R, 2.0 * s - n) *
           std::pow(ang(lam, r), -2.0 * s);
  }
  double w2(int i, double r) const {
    const double lam = l(i), n = amb.n, s = amb.s;
    if (lam * r < R) return 0.0;
    return std::pow(lam, 0.5 * (n - 2.0 * s)) * std::pow(R, -4.0 * s) *
           std::pow(ang(lam, r), -(n - 4.0 * s));
  }
  double v1(int i, double r) const {
    const double lam = l(i), n = amb.n, s = amb.s;
    if (lam * r > R) return 0.0;
    return std::pow(lam, 0.5 * (n + 2.0 * s)) * std::pow(R, 2.0 * s - n) *
           std::pow(ang(lam, r), -4.0 * s);
  }
  double v2(int i, double r) const {
    const double lam = l(i), n = amb.n, s = amb.s;
    if (lam * r < R) return 0.0;
    return std::pow(lam, 0.5 * (n + 2.0 * s)) * std::pow(R, -4.0 * s) *
           std::pow(ang(lam, r), -(n - 2.0 * s));
  }
  // U^{p-1} and U shapes without the normalization constant
  double up1(int i, double r) const {
    return std::pow(l(i), 2.0 * amb.s) *
           std::pow(ang(l(i), r), -4.0 * amb.s);
  }
  double ubar(int i, double r) const {
    const double m = amb.m();
    return std::pow(l(i), m) * std::pow(ang(l(i), r), -2.0 * m);
  }

  double radial(const std::function<double(double)>& f, double decay,
                const QuadratureSpec& spec) const {
    return quad::integrate_radial(f, amb.n, decay, spec,
                                  {R / l(0), 1.0 / l(0), 1.0 / l(1)});
  }
  double cross(const std::function<double(double, double)>& g,
               const QuadratureSpec& spec) const {
    return fields::integrate_two_center(g, fam.bubbles[0], fam.bubbles[1],
                                        spec, {R / l(0)}, {R / l(1)});
  }
  double dist() const {
    double d2 = 0.0;
    for (int k = 0; k < amb.n; ++k)
      d2 += sqr(fam.bubbles[0].z[k] - fam.bubbles[1].z[k]);
    return std::sqrt(d2);
  }
  // region overlap tests; the indicator balls have radius R / lambda
  bool in_in() const {
    const double r1 = R / l(0), r2 = R / l(1);
    return dist() < r1 + r2 - 1e-9 * (r1 + r2);
  }
  bool in_out(int in_idx) const {
    const double ri = R / l(in_idx), ro = R / l(1 - in_idx);
    return dist() + ri > ro * (1.0 + 1e-9);
  }
};

struct RowSpec {
  std::string id;
  std::function<bool(const RowContext&)> applicable;
  std::function<double(const RowContext&, const QuadratureSpec&)> value;
};

LemmaTable run_table(const std::string& lemma, const Ambient& amb,
                     const BubbleFamily& tmpl,
                     const std::vector<double>& R_grid,
                     const std::vector<RowSpec>& rows,
                     const QuadratureSpec& spec) {
  amb.validate();
  std::vector<RowContext> ctxs;
  for (double R : R_grid)
    ctxs.push_back({amb, family_for_target(amb, tmpl, R), R});

  LemmaTable table;
  table.lemma = lemma;
  for (const RowSpec& row : rows) {
    LemmaRow out;
    out.id = row.id;
    out.applicable = std::all_of(ctxs.begin(), ctxs.end(),
                                 [&](const RowContext& c) {
                                   return row.applicable(c);
                                 });
    if (out.applicable) {
      const auto vals = parallel_map(ctxs.size(), [&](std::size_t k) {
        return row.value(ctxs[k], spec);
      });
      std::vector<std::pair<double, double>> samples;
      for (std::size_t k = 0; k < ctxs.size(); ++k)
        samples.push_back({R_grid[k], vals[k]});
      out.fit = fit_rate(samples);
    }
    table.rows.push_back(std::move(out));
  }
  return table;
}

bool always(const RowContext&) { return true; }

}  // namespace

LemmaTable lemma_B1_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec) {
  const double n = amb.n, s = amb.s;
  if (n < 6.0 * s - 1e-12)
    throw std::invalid_argument("squared-weight table needs n >= 6s");
  std::vector<RowSpec> rows;
  rows.push_back({"U1-w11sq", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.up1(0, r) * sqr(c.w1(0, r)); },
                        c.amb.n + 1.0, sp);
                  }});
  rows.push_back({"U1-w12sq", always,
                  [n, s](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.up1(0, r) * sqr(c.w2(0, r)); },
                        2.0 * n - 4.0 * s, sp);
                  }});
  rows.push_back({"U2-w11sq", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.up1(1, r2) * sqr(c.w1(0, r1));
                        },
                        sp);
                  }});
  rows.push_back({"U2-w12sq", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.up1(1, r2) * sqr(c.w2(0, r1));
                        },
                        sp);
                  }});
  return run_table("B1", amb, tmpl, R_grid, rows, spec);
}

LemmaTable lemma_B2_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec) {
  const double n = amb.n, s = amb.s;
  if (n < 6.0 * s - 1e-12)
    throw std::invalid_argument("weight-product table needs n >= 6s");
  const bool above = n > 6.0 * s + 1e-9;
  std::vector<RowSpec> rows;
  rows.push_back({"s-c-1", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.v1(0, r) * c.w1(0, r); },
                        c.amb.n + 1.0, sp);
                  }});
  rows.push_back({"s-c-2",
                  [above](const RowContext&) { return above; },
                  [n, s](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.v2(0, r) * c.w2(0, r); },
                        2.0 * n - 6.0 * s, sp);
                  }});
  rows.push_back({"s-c-3",
                  [](const RowContext& c) { return c.in_in(); },
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v1(0, r1) * c.w1(1, r2);
                        },
                        sp);
                  }});
  rows.push_back({"s-c-4",
                  [](const RowContext& c) { return c.in_out(0); },
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v1(0, r1) * c.w2(1, r2);
                        },
                        sp);
                  }});
  rows.push_back({"s-c-5",
                  [](const RowContext& c) { return c.in_out(1); },
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v2(0, r1) * c.w1(1, r2);
                        },
                        sp);
                  }});
  rows.push_back({"s-c-6",
                  [above](const RowContext&) { return above; },
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v2(0, r1) * c.w2(1, r2);
                        },
                        sp);
                  }});
  return run_table("B2", amb, tmpl, R_grid, rows, spec);
}

RateFit lemma_B3_check(const Ambient& amb, const BubbleFamily& tmpl,
                       const std::vector<double>& R_grid,
                       const QuadratureSpec& spec) {
  amb.validate();
  if (std::abs(amb.n - 6.0 * amb.s) > 1e-9)
    throw std::invalid_argument("threshold-dimension check needs n = 6s");
  const double s = amb.s;
  const auto vals = parallel_map(R_grid.size(), [&](std::size_t k) {
    const double R = R_grid[k];
    const auto fam = family_for_target(amb, tmpl, R);
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double lj = fam.bubbles[j].lambda;
      auto g = [&](double r1, double r2) {
        const double rj = j == 0 ? r1 : r2;
        return bubbles::bubble_radial(amb, fam.bubbles[0].lambda, r1) *
               bubbles::bubble_radial(amb, fam.bubbles[1].lambda, r2) *
               std::pow(lj, 2.0 * s) * std::pow(R, -4.0 * s) *
               std::pow(ang(lj, rj), -2.0 * s);
      };
      total += fields::integrate_two_center(g, fam.bubbles[0], fam.bubbles[1],
                                            spec);
    }
    return total;
  });
  std::vector<std::pair<double, double>> samples;
  for (std::size_t k = 0; k < R_grid.size(); ++k)
    samples.push_back({R_grid[k], vals[k]});
  return fit_rate(samples);
}

LemmaTable lemma_B4_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec) {
  const double n = amb.n, s = amb.s;
  if (n < 6.0 * s - 1e-12)
    throw std::invalid_argument("weight-bubble table needs n >= 6s");
  std::vector<RowSpec> rows;
  rows.push_back({"V-U-1", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.v1(0, r) * c.ubar(0, r); },
                        c.amb.n + 1.0, sp);
                  }});
  rows.push_back({"V-U-2", always,
                  [n, s](const RowContext& c, const QuadratureSpec& sp) {
                    return c.radial(
                        [&](double r) { return c.v2(0, r) * c.ubar(0, r); },
                        2.0 * n - 4.0 * s, sp);
                  }});
  rows.push_back({"V-U-3", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v1(0, r1) * c.ubar(1, r2);
                        },
                        sp);
                  }});
  rows.push_back({"V-U-4", always,
                  [](const RowContext& c, const QuadratureSpec& sp) {
                    return c.cross(
                        [&](double r1, double r2) {
                          return c.v2(0, r1) * c.ubar(1, r2);
                        },
                        sp);
                  }});
  return run_table("B4", amb, tmpl, R_grid, rows, spec);
}

void write_table_csv(const LemmaTable& table, const Ambient& amb,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "lemma_row,n,s,R,value,fitted_exponent,log_factor,r_squared\n";
  out << std::setprecision(17);
  for (const LemmaRow& row : table.rows) {
    if (!row.applicable) continue;
    for (const auto& [R, v] : row.fit.samples)
      out << row.id << ',' << amb.n << ',' << amb.s << ',' << R << ',' << v
          << ',' << row.fit.fitted_exponent << ','
          << (row.fit.log_factor_detected ? 1 : 0) << ',' << row.fit.r_squared
          << '\n';
  }
}

}  // namespace fraclab::appendix
