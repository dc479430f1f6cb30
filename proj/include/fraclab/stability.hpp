#pragma once

#include "fraclab/appendix.hpp"
#include "fraclab/bubbles.hpp"
#include "fraclab/fields.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/quadrature.hpp"

#include <stdexcept>
#include <vector>

namespace fraclab::stability {

using bubbles::Ambient;
using bubbles::BubbleFamily;
using bubbles::PairKind;
using bubbles::Point;
using quad::QuadratureSpec;

// Lipschitz log-profile bump: 1 on the inner ball, log(R/|x|)/log(R/r)
// in the annulus, 0 outside.
struct CutoffSpec {
  Point center;
  double r_inner = 0.0;
  double r_outer = 0.0;

  void validate() const;  // 0 < r_inner < r_outer
};

fraclap::RadialProfile build_cutoff(const CutoffSpec& cs);

// Sweeps int |(-Delta)^{s/2} phi|^{n/s} over ratio = R/r; samples are
// (log(R/r), value). The claim is one-sided (value <= C log^{1-n/s}), and
// at accessible ratios the raw values approach that envelope from far
// below (the edge layers of the annulus relax only like ratio^{-s}), so a
// naive two-sided fit is meaningless here. Instead the envelope constant
// is computed in closed form from the local model
//   (-Delta)^{s/2} phi ~ C_log r^{-s} / log(R/r),
//   C_log = 4^{s/2} Gamma(s/2) Gamma(n/2) / (2 Gamma((n-s)/2)),
// and fitted_exponent is the certified one-sided exponent: the smallest b
// with value_i <= A log(R/r)_i^b for all i, A = |S^{n-1}| C_log^{n/s}.
// It tends to 1 - n/s from below as the ratios grow.
appendix::RateFit verify_cutoff_gradient_bound(const Ambient& amb,
                                               const std::vector<double>& ratios,
                                               const QuadratureSpec& spec);

// Radial Galerkin estimates for the eigenvalues of (-Delta)^s / U^{p-1} on
// the radial sector, basis psi_k = (1+r^2)^{-(n-2s)/2 - k}. Returns the
// sorted variational eigenvalue estimates; the exact values 1 (U itself)
// and p (dilation mode) lie in the span.
std::vector<double> spectral_gap_radial(const Ambient& amb, int basis_size,
                                        const QuadratureSpec& spec);

// Two bubbles collapsing onto each other make the projection Gram matrix
// singular; reported distinctly from plain non-convergence.
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProjectionResult {
  BubbleFamily bubbles;  // alphas filled when optimized over
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // |<rho, U_i>| followed by |<rho, Z_i^a>|, a = 1..n+1, per bubble
  std::vector<double> ortho_residuals;
  // best objective value after each accepted optimizer step
  std::vector<double> objective_trace;
};

// Locally minimizes ||u - sum alpha_i U[z_i, lambda_i]||_{Hdot^s}^2 over
// (z_i, log lambda_i) with alpha solved exactly per configuration
// (fixed to 1 when with_alphas is false). Derivative-free simplex seeded
// from spec.seed, followed by a first-order polish using the exact
// gradient through the derivative modes.
ProjectionResult project_to_manifold(const fields::FunctionRepr& u, int nu,
                                     const BubbleFamily& init,
                                     bool with_alphas,
                                     const QuadratureSpec& spec);

// || (-Delta)^s u - u|u|^{p-1} ||_{H^-s}; radial fast path when every
// term shares one center and only dilation modes appear.
double deficit(const fields::FunctionRepr& u, const QuadratureSpec& spec);

enum class Regime { Linear, Log, Power };  // 2s < n < 6s, n = 6s, n > 6s

struct DeficitReport {
  double gamma = 0.0;
  double q = 0.0;
  Regime regime = Regime::Linear;
  double rhs = 0.0;  // fitted constant times the regime function of gamma
};

// For u = U_1 + U_2 per separation (cluster: distances at unit scales;
// tower: scale ratios, coincident), computes Q and the deficit. Every
// family must be delta-interacting with Q <= 0.01; otherwise
// std::invalid_argument.
std::vector<DeficitReport> q_gamma_sweep(const Ambient& amb, PairKind mode,
                                         const std::vector<double>& separations,
                                         const QuadratureSpec& spec);

}  // namespace fraclab::stability
