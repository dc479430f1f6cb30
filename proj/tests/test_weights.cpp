#include "doctest.h"

#include "fraclab/fraclap.hpp"
#include "fraclab/weights.hpp"

#include <cmath>

using namespace fraclab;
using bubbles::Ambient;
using bubbles::Bubble;
using bubbles::BubbleFamily;
using bubbles::Point;
using weights::WeightContext;

namespace {

BubbleFamily family2(const Ambient& amb, double l1, double l2, double d) {
  BubbleFamily f;
  f.ambient = amb;
  f.bubbles.push_back({Point(amb.n, 0.0), l1});
  Point z2(amb.n, 0.0);
  z2[0] = d;
  f.bubbles.push_back({z2, l2});
  return f;
}

WeightContext single_ctx(const Ambient& amb, double R) {
  WeightContext ctx;
  ctx.family.ambient = amb;
  ctx.family.bubbles.push_back({Point(amb.n, 0.0), 1.0});
  ctx.R = R;
  return ctx;
}

}  // namespace

TEST_CASE("weight values at reference points") {
  const Ambient amb{3, 0.5};
  const double R = 10.0;
  auto ctx = single_ctx(amb, R);
  const double n = amb.n, s = amb.s;

  const Point origin(amb.n, 0.0);
  CHECK(weights::eval_W(ctx, origin) ==
        doctest::Approx(std::pow(R, 2.0 * s - n)).epsilon(1e-14));
  CHECK(weights::eval_V(ctx, origin) ==
        doctest::Approx(std::pow(R, 2.0 * s - n)).epsilon(1e-14));

  // |y| = R exactly: both indicators are inclusive
  const Point edge{R, 0.0, 0.0};
  const double br = std::sqrt(1.0 + R * R);
  const double w_expected = std::pow(R, 2.0 * s - n) * std::pow(br, -2.0 * s) +
                            std::pow(R, -4.0 * s) * std::pow(br, 4.0 * s - n);
  CHECK(weights::eval_W(ctx, edge) ==
        doctest::Approx(w_expected).epsilon(1e-14));
  CHECK(weights::w_piece(ctx, 0, 1, edge) > 0.0);
  CHECK(weights::w_piece(ctx, 0, 2, edge) > 0.0);

  // far field: only the outer pieces
  const Point far{10.0 * R, 0.0, 0.0};
  const double brf = std::sqrt(1.0 + 100.0 * R * R);
  CHECK(weights::eval_W(ctx, far) ==
        doctest::Approx(std::pow(R, -4.0 * s) * std::pow(brf, 4.0 * s - n))
            .epsilon(1e-14));
  CHECK(weights::eval_V(ctx, far) ==
        doctest::Approx(std::pow(R, -4.0 * s) * std::pow(brf, 2.0 * s - n))
            .epsilon(1e-14));
  CHECK(weights::w_piece(ctx, 0, 1, far) == 0.0);
}

TEST_CASE("smooth min approximation") {
  const double mu = 0.1;
  for (double a : {0.3, 1.0, 7.5}) {
    CHECK(weights::F_min_approx(a, a, mu) ==
          doctest::Approx(a * (1.0 - std::sqrt(mu))).epsilon(1e-14));
  }
  // homogeneity
  const double f0 = weights::F_min_approx(2.0, 5.0, mu);
  for (double t : {0.25, 3.0, 1e4}) {
    CHECK(weights::F_min_approx(2.0 * t, 5.0 * t, mu) ==
          doctest::Approx(t * f0).epsilon(1e-13));
  }
  // dominated side
  const double f = weights::F_min_approx(1.0, 1e6, mu);
  CHECK(f >= 0.0);
  CHECK(f <= 1.0);
  CHECK_THROWS_AS(weights::F_min_approx(1.0, 1.0, 0.7),
                  std::invalid_argument);
}

TEST_CASE("blended weights against the piecewise ones") {
  const Ambient amb{4, 0.5};
  auto ctx = weights::make_context(family2(amb, 1.0, 1.0, 100.0));

  // empty blend reduces to the inner distinguished piece
  const Point x{3.0, 1.0, 0.0, -2.0};
  CHECK(weights::eval_tilde_W(ctx, {}, 0, x) ==
        doctest::Approx(weights::w_piece(ctx, 0, 1, x)).epsilon(1e-14));
  CHECK(weights::eval_tilde_V(ctx, {}, 0, x) ==
        doctest::Approx(weights::v_piece(ctx, 0, 1, x)).epsilon(1e-14));

  // near the second center the fast branch dominates the blend
  const double m = amb.m();
  for (double r : {0.0, 0.5, 2.0}) {
    Point y = ctx.family.bubbles[1].z;
    y[1] += r;
    const double lam = ctx.family.bubbles[1].lambda;
    const double br = std::sqrt(1.0 + lam * lam * r * r);
    const double a = std::pow(ctx.R, 2.0 * amb.s - amb.n) *
                     std::pow(br, -2.0 * amb.s);
    const double blended =
        weights::eval_tilde_W(ctx, {1}, 0, y) - weights::w_piece(ctx, 0, 1, y);
    const double ratio = blended / (std::pow(lam, m) * a);
    CHECK(ratio <= 1.0 + 1e-12);
    CHECK(ratio >= 1.0 - 2.0 * std::sqrt(ctx.mu));
  }

  // comparability with the piecewise sum over the structured grid
  const auto grid = weights::structured_grid(ctx, 8);
  double lo = 1e300, hi = 0.0;
  for (const Point& p : grid) {
    const double denom = weights::w_piece(ctx, 1, 1, p) +
                         weights::w_piece(ctx, 1, 2, p) +
                         weights::w_piece(ctx, 0, 1, p);
    if (denom <= 0.0) continue;
    const double ratio = weights::eval_tilde_W(ctx, {1}, 0, p) / denom;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo >= 0.25);
  CHECK(hi <= 4.0);
}

TEST_CASE("grid supremum norms are exact on the weights themselves") {
  const Ambient amb{3, 0.5};
  auto ctx = weights::make_context(family2(amb, 1.0, 1.0, 30.0));
  auto W = [&](const Point& x) { return weights::eval_W(ctx, x); };
  CHECK(weights::star_norm(W, ctx).value == doctest::Approx(1.0).epsilon(1e-12));
  auto W2 = [&](const Point& x) { return 2.0 * weights::eval_W(ctx, x); };
  CHECK(weights::star_norm(W2, ctx).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  auto V = [&](const Point& x) { return weights::eval_V(ctx, x); };
  CHECK(weights::doublestar_norm(V, ctx).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  // bounded positive factor attaining its sup on the grid
  auto Wg = [&](const Point& x) {
    const double g = 1.0 + 1.0 / (1.0 + x[0] * x[0]);
    return g * weights::eval_W(ctx, x);
  };
  const auto r = weights::star_norm(Wg, ctx);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("interaction term stays bounded in the weighted norm") {
  const Ambient amb{4, 0.5};

  SUBCASE("single bubble gives zero") {
    auto ctx = single_ctx(amb, 10.0);
    CHECK(weights::verify_h_bound(ctx).value == 0.0);
  }

  SUBCASE("towers across scale ratios") {
    std::vector<double> cs;
    for (double ratio : {1e2, 1e3, 1e4}) {
      auto ctx = weights::make_context(family2(amb, ratio, 1.0, 0.0));
      const auto r = weights::verify_h_bound(ctx);
      CHECK(r.value > 0.0);
      cs.push_back(r.value);
    }
    const double cmax = *std::max_element(cs.begin(), cs.end());
    const double cmin = *std::min_element(cs.begin(), cs.end());
    CHECK(cmax <= 1.5 * cmin / (1.0 - 1.0 / 3.0));  // within +-50%
  }

  SUBCASE("clusters across separations") {
    std::vector<double> cs;
    for (double d : {1e2, 1e3}) {
      auto ctx = weights::make_context(family2(amb, 1.0, 1.0, d));
      const auto r = weights::verify_h_bound(ctx);
      CHECK(r.value > 0.0);
      cs.push_back(r.value);
    }
    CHECK(std::max(cs[0], cs[1]) <= 2.0 * std::min(cs[0], cs[1]));
  }
}

TEST_CASE("weighted fractional Laplacian lower bounds") {
  for (const Ambient amb : {Ambient{3, 0.5}, Ambient{4, 0.5}}) {
    const auto rep = weights::verify_laplace_inequality(amb);
    CHECK(rep.alpha > 0.0);
    CHECK(rep.companion > 0.0);
    CHECK(rep.companion_negative_exponent_form);
  }
  // the normalized product approaches a positive constant at infinity
  const Ambient amb{3, 0.5};
  auto prod = [&](double r) {
    return fraclap::fraclap_inverse_quadratic(amb.n, amb.s, amb.s, r) *
           std::pow(1.0 + r * r, 2.0 * amb.s);
  };
  const double p2 = prod(1e2), p3 = prod(1e3);
  CHECK(p3 > 0.0);
  CHECK(std::abs(p3 / p2 - 1.0) <= 0.2);
}

TEST_CASE("region inequalities for separated bubbles") {
  const Ambient amb{4, 0.5};
  const double L = 10.0;

  SUBCASE("single bubble gives an empty report") {
    WeightContext ctx = single_ctx(amb, 10.0);
    CHECK(weights::verify_weight_comparisons(ctx, L).checks.empty());
  }

  SUBCASE("cluster ratios are small and shrink with separation") {
    double prev = -1.0;
    for (double d : {1e2, 1e3}) {
      auto ctx = weights::make_context(family2(amb, 1.0, 1.0, d));
      const auto rep = weights::verify_weight_comparisons(ctx, L);
      // equal scales: no finer-scale partner, only the pair-far check
      REQUIRE(rep.checks.size() == 1);
      CHECK(!rep.checks[0].vacuous());
      const double eps1 = rep.checks[0].sup_ratio;
      if (d == 1e3) CHECK(eps1 <= 0.5);
      if (prev >= 0.0) CHECK(eps1 <= 1.1 * prev);
      prev = eps1;

      const auto j = rep.to_json();
      CHECK(j.is_array());
      CHECK(j.size() == rep.checks.size());
      CHECK(j[0].contains("sup_ratio"));
    }
  }

  SUBCASE("tower core-region checks are present and finite") {
    auto ctx = weights::make_context(family2(amb, 1.0, 100.0, 0.0));
    const auto rep = weights::verify_weight_comparisons(ctx, L, 0.5);
    // pair-far plus the two core checks of the coarse bubble
    REQUIRE(rep.checks.size() == 3);
    for (const auto& c : rep.checks) {
      CHECK(!c.vacuous());
      CHECK(c.sup_ratio < 5.0);
      CHECK(std::isfinite(c.sup_ratio));
    }
  }
}
