#pragma once

#include "fraclab/bubbles.hpp"
#include "fraclab/quadrature.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fraclab::appendix {

using bubbles::Ambient;
using bubbles::Bubble;
using bubbles::BubbleFamily;
using bubbles::PairKind;
using quad::QuadratureSpec;

// Power-law fit of a positive quantity against a sweep parameter.
// log_factor_detected reports whether v = C R^a log R explains the samples
// at least 10x better (residual sum) than a pure power.
struct RateFit {
  std::vector<std::pair<double, double>> samples;  // (R, value)
  double fitted_exponent = 0.0;
  bool log_factor_detected = false;
  double r_squared = 0.0;
};

// Least-squares slope of log value vs log R. Requires >= 4 samples spanning
// at least two decades with positive values; throws std::invalid_argument
// otherwise.
RateFit fit_rate(const std::vector<std::pair<double, double>>& samples);

// int U_i^{p-1} Z_i^a Z_j^b over R^n; a, b in [1, n+1] (n+1 = dilation mode)
double gram_A5(const Ambient& amb, const BubbleFamily& family, int i, int j,
               int a, int b, const QuadratureSpec& spec);

// int U_1^p U_2 over R^n
double interaction_integral(const Ambient& amb, const Bubble& b1,
                            const Bubble& b2, const QuadratureSpec& spec);

// Sweeps int U_1^p U_2 along a one-parameter family and fits log value
// against log q_12. Cluster: grid values are center distances at unit
// scales. Tower: grid values are scale ratios at coincident centers.
// The slope is 1 when the interaction integral is proportional to q_12.
RateFit interaction_asymptotics(const Ambient& amb, PairKind mode,
                                const std::vector<double>& R_grid,
                                const QuadratureSpec& spec);

// One integral estimate of a lemma table. Rows whose indicator region is
// empty for the swept configuration, or whose integrand fails to decay at
// the given (n, s), are flagged inapplicable and left unevaluated.
struct LemmaRow {
  std::string id;
  bool applicable = true;
  RateFit fit;
};

struct LemmaTable {
  std::string lemma;
  std::vector<LemmaRow> rows;
};

// Two-bubble family realizing concentration radius R_12 = 2R, in the mode
// of the template pair. Cluster: geometric-mean scale kept, center distance
// 2R in internal units. Tower: coarse scale kept, ratio 4R^2, coincident.
BubbleFamily family_for_target(const Ambient& amb, const BubbleFamily& tmpl,
                               double R);

// Four U^{p-1} w^2 integrals. The first row carries the in-ball mass of
// <y>^{-8s}: rate R^{-n-4s} for n > 8s, log factor at n = 8s, and the
// saturated rate R^{4s-2n} below.
LemmaTable lemma_B1_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec);

// Six v w product integrals over their indicator regions. Two-sided rate
// -(n+2s) on the first two rows for n > 6s; log factor on the threshold
// dimension n = 6s.
LemmaTable lemma_B2_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec);

// Threshold-dimension (n = 6s) tower estimate
// sum_j int U_1 U_2 lambda_j^{2s} R^{-4s} <y_j>^{-2s}.
RateFit lemma_B3_check(const Ambient& amb, const BubbleFamily& tmpl,
                       const std::vector<double>& R_grid,
                       const QuadratureSpec& spec);

// Four v-against-bubble-tail integrals; rates R^{2s-n}, R^{-n} (two-sided)
// and the same bounds one-sided on the cross rows.
LemmaTable lemma_B4_table(const Ambient& amb, const BubbleFamily& tmpl,
                          const std::vector<double>& R_grid,
                          const QuadratureSpec& spec);

// CSV rows: lemma_row,n,s,R,value,fitted_exponent,log_factor,r_squared
void write_table_csv(const LemmaTable& table, const Ambient& amb,
                     const std::string& path);

}  // namespace fraclab::appendix
