#pragma once

#include "fraclab/bubbles.hpp"
#include "fraclab/quadrature.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace fraclab::fields {

using bubbles::Ambient;
using bubbles::Bubble;
using bubbles::BubbleFamily;
using bubbles::Point;
using bubbles::ZMode;
using quad::QuadratureSpec;

// Linear combination of bubbles and their derivative modes. Everything the
// lab integrates is of this shape, so norms and inner products reduce to
// quadrature of closed-form integrands. ZMode.bubble_index refers into
// bubble_terms.
struct FunctionRepr {
  Ambient ambient;
  std::vector<std::pair<double, Bubble>> bubble_terms;
  std::vector<std::pair<double, ZMode>> z_terms;

  double eval(const Point& x) const;
  // (-Delta)^s applied term by term via (-Delta)^s U = U^p and
  // (-Delta)^s Z = p U^{p-1} Z
  double eval_fraclap(const Point& x) const;
};

// sum alpha_i U_i as a FunctionRepr
FunctionRepr from_family(const BubbleFamily& f);

// S^{n/s} = int U^{2*} for a unit bubble
double sharp_constant_pow(const Ambient& amb, const QuadratureSpec& spec);

// int_{R^n} g(|x-z1|, |x-z2|) dx, reduced to a 2D integral in the plane
// spanned by the two centers. r1_breaks / r2_breaks mark radii where g is
// not smooth in the corresponding argument (indicator boundaries).
double integrate_two_center(const std::function<double(double, double)>& g,
                            const Bubble& b1, const Bubble& b2,
                            const QuadratureSpec& spec,
                            const std::vector<double>& r1_breaks = {},
                            const std::vector<double>& r2_breaks = {});

// <u, v>_{Hdot^s} = int ((-Delta)^s u) v. Expanded bilinearly into pair
// integrals; each pair involves at most two centers, so every term goes
// through the radial or two-center path.
double hs_inner(const FunctionRepr& u, const FunctionRepr& v,
                const QuadratureSpec& spec);

// Low-discrepancy importance-sampled evaluation of the same inner product
// (proposal: normalized mixture of |U_i|^{2*}). Used as an independent
// cross-check path for families with three or more centers.
double hs_inner_qmc(const FunctionRepr& u, const FunctionRepr& v,
                    const QuadratureSpec& spec);

// Gamma(n/2-s) / (4^s pi^{n/2} Gamma(s))
double riesz_constant(int n, double s);

// Pointwise function with power-law decay. radial (optional) enables the
// deterministic nested-quadrature path; carriers supply centers and scales
// for the sampling proposal otherwise.
struct PointwiseField {
  std::function<double(const Point&)> eval;
  std::function<double(double)> radial;
  double decay = 0.0;
  std::vector<double> radial_breaks;
  std::vector<Bubble> carriers;
};

// ||f||_{H^{-s}} = sqrt(C_R(n,s) int int f(x) f(y) |x-y|^{2s-n} dx dy)
double neg_sobolev_norm(const PointwiseField& f, const Ambient& amb,
                        const QuadratureSpec& spec);

}  // namespace fraclab::fields
