#pragma once

#include "json.hpp"

#include <vector>

namespace fraclab::bubbles {

using Point = std::vector<double>;

struct Ambient {
  int n = 3;
  double s = 0.5;

  double p() const { return (n + 2.0 * s) / (n - 2.0 * s); }
  double two_star() const { return 2.0 * n / (n - 2.0 * s); }
  double m() const { return (n - 2.0 * s) / 2.0; }  // bubble half-exponent
  void validate() const;
};

struct Bubble {
  Point z;
  double lambda = 1.0;
};

struct BubbleFamily {
  Ambient ambient;
  std::vector<Bubble> bubbles;
  std::vector<double> alphas;  // empty means all coefficients are 1

  double alpha(std::size_t i) const {
    return alphas.empty() ? 1.0 : alphas[i];
  }
};

// a in [1, n]: rescaled translation derivatives; a = n+1: dilation derivative
struct ZMode {
  int bubble_index = 0;
  int a = 1;
};

enum class PairKind { Tower, Cluster };

// c with (-Delta)^s U = U^p for U = c (lambda/(1+lambda^2 |x-z|^2))^{(n-2s)/2}
double normalization_constant(const Ambient& amb);

double bubble_radial(const Ambient& amb, double lambda, double r);
double bubble_eval(const Ambient& amb, const Bubble& b, const Point& x);

double z_mode_eval(const Ambient& amb, const ZMode& m,
                   const BubbleFamily& family, const Point& x);

// same derivative mode, referencing a bubble directly
double z_mode_eval(const Ambient& amb, const Bubble& b, int a, const Point& x);

double q_ij(const Ambient& amb, const Bubble& bi, const Bubble& bj);

// max over unordered pairs of q_ij
double family_Q(const BubbleFamily& family);

// the alternative interaction quantity min_{i!=j} of the three ratio terms,
// recorded in reports alongside family_Q; the two are equivalent only up to
// dimensional constants
double family_Q_min_form(const BubbleFamily& family);

struct ConcentrationRadii {
  std::vector<std::vector<double>> R_ij;
  double R = 0.0;
};
ConcentrationRadii R_ij_and_R(const BubbleFamily& family);

// Cluster iff the distance term attains the max in R_ij; ties go to Tower
PairKind classify_pair(const BubbleFamily& family, int i, int j);

bool is_delta_interacting(const BubbleFamily& family, double delta);

nlohmann::json family_to_json(const BubbleFamily& family);
BubbleFamily family_from_json(const nlohmann::json& j);

}  // namespace fraclab::bubbles
