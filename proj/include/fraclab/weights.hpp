#pragma once

#include "fraclab/bubbles.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fraclab::weights {

using bubbles::Ambient;
using bubbles::BubbleFamily;
using bubbles::Point;

// Family-attached weight data: R is half the smallest concentration radius,
// mu the parameter of the smooth min approximation.
struct WeightContext {
  BubbleFamily family;
  double R = 0.0;
  double mu = 0.1;

  void validate() const;  // R > 1, mu in (0, 1/2)
};

// R filled from the family's concentration radii (needs >= 2 bubbles)
WeightContext make_context(const BubbleFamily& family, double mu = 0.1);

// individual pieces; which is 1 (inner, |y_i| <= R) or 2 (outer, >= R/2);
// boundaries inclusive
double w_piece(const WeightContext& ctx, std::size_t i, int which,
               const Point& x);
double v_piece(const WeightContext& ctx, std::size_t i, int which,
               const Point& x);

double eval_W(const WeightContext& ctx, const Point& x);
double eval_V(const WeightContext& ctx, const Point& x);

// (a+b)/2 - sqrt((a-b)^2/4 + mu a b), a smooth approximation of min(a,b)
double F_min_approx(double a, double b, double mu);

// Smooth blended weights over the index set J plus the inner piece of the
// distinguished bubble i0.
double eval_tilde_W(const WeightContext& ctx, const std::vector<int>& J,
                    int i0, const Point& x);
double eval_tilde_V(const WeightContext& ctx, const std::vector<int>& J,
                    int i0, const Point& x);

// Structured sample grid: per-bubble log-radial shells along a fixed angular
// design, inter-center segment points, and the centers themselves.
// per_decade controls the radial density.
std::vector<Point> structured_grid(const WeightContext& ctx, int per_decade);

struct SupResult {
  double value = 0.0;
  Point argmax;
  std::size_t samples = 0;
};

// sup |phi| / W over the structured grid; density doubles until the value
// stabilizes below 1%
SupResult star_norm(const std::function<double(const Point&)>& phi,
                    const WeightContext& ctx);
// sup |h| / V, same scheme
SupResult doublestar_norm(const std::function<double(const Point&)>& h,
                          const WeightContext& ctx);

// sup |sigma^p - sum U_i^p| / V over the grid (sigma the plain bubble sum)
SupResult verify_h_bound(const WeightContext& ctx);

// min over a log grid of (-Delta)^s (1+r^2)^{-s} (1+r^2)^{2s}, together
// with the analogous constant for the slow-decay weight pair; both must be
// strictly positive. companion uses the negative-exponent form
// (-Delta)^s <y>^{-(n-4s)} >= c <y>^{-(n-2s)}.
struct LaplaceReport {
  double alpha = 0.0;
  double companion = 0.0;
  bool companion_negative_exponent_form = true;
};
LaplaceReport verify_laplace_inequality(const Ambient& amb);

struct InequalityCheck {
  std::string id;
  double sup_ratio = 0.0;
  Point argmax;
  std::size_t samples = 0;
  bool vacuous() const { return samples == 0; }
};

struct ComparisonReport {
  std::vector<InequalityCheck> checks;
  nlohmann::json to_json() const;
};

// Empirical sup ratios of the pairwise-region inequality (both bubbles far)
// and, for each bubble i with a finer-scale partner j, the two inequalities
// on the region {|y_i| <= L, |y_i - lambda_i (z_j - z_i)| <= eps_region,
// |y_j| >= L}. The partner set of i holds the bubbles with larger scale;
// when it is empty the corresponding checks are omitted.
ComparisonReport verify_weight_comparisons(const WeightContext& ctx, double L,
                                           double eps_region = 1.0);

}  // namespace fraclab::weights
