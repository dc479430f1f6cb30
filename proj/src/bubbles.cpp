#include "fraclab/bubbles.hpp"

#include "fraclab/fraclap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fraclab::bubbles {

namespace {

double dist2(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    d += t * t;
  }
  return d;
}

void require_pairable(const BubbleFamily& f) {
  if (f.bubbles.size() < 2)
    throw std::invalid_argument("pair quantities need at least two bubbles");
}

}  // namespace

void Ambient::validate() const {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("fractional order s must lie in (0,1)");
  if (!(n > 2.0 * s)) throw std::domain_error("requires n > 2s");
}

double normalization_constant(const Ambient& amb) {
  amb.validate();
  return fraclap::bubble_normalization(amb.n, amb.s);
}

double bubble_radial(const Ambient& amb, double lambda, double r) {
  const double c = normalization_constant(amb);
  return c * std::pow(lambda / (1.0 + lambda * lambda * r * r), amb.m());
}

double bubble_eval(const Ambient& amb, const Bubble& b, const Point& x) {
  return bubble_radial(amb, b.lambda, std::sqrt(dist2(x, b.z)));
}

double z_mode_eval(const Ambient& amb, const ZMode& mode,
                   const BubbleFamily& family, const Point& x) {
  if (mode.bubble_index < 0 ||
      mode.bubble_index >= static_cast<int>(family.bubbles.size()))
    throw std::out_of_range("mode references a bubble outside the family");
  return z_mode_eval(amb, family.bubbles[mode.bubble_index], mode.a, x);
}

double z_mode_eval(const Ambient& amb, const Bubble& b, int a, const Point& x) {
  if (a < 1 || a > amb.n + 1)
    throw std::out_of_range("mode axis outside [1, n+1]");
  const ZMode mode{0, a};
  const double m = amb.m();
  const double c = normalization_constant(amb);
  const double lam = b.lambda;
  const double rho2 = dist2(x, b.z);
  const double u = 1.0 + lam * lam * rho2;
  if (mode.a <= amb.n) {
    // lambda^{-1} dU/dz^a = 2 m c lambda^{m+1} (x-z)_a u^{-m-1}
    const double xa = x[mode.a - 1] - b.z[mode.a - 1];
    return 2.0 * m * c * std::pow(lam, m + 1.0) * xa * std::pow(u, -m - 1.0);
  }
  // lambda dU/dlambda = m U (1 - lambda^2 rho^2) / (1 + lambda^2 rho^2)
  const double U = c * std::pow(lam / u, m);
  return m * U * (1.0 - lam * lam * rho2) / u;
}

double q_ij(const Ambient& amb, const Bubble& bi, const Bubble& bj) {
  const double li = bi.lambda, lj = bj.lambda;
  const double base = li / lj + lj / li + li * lj * dist2(bi.z, bj.z);
  return std::pow(base, -(amb.n - 2.0 * amb.s) / 2.0);
}

double family_Q(const BubbleFamily& f) {
  require_pairable(f);
  double q = 0.0;
  for (std::size_t i = 0; i < f.bubbles.size(); ++i)
    for (std::size_t j = i + 1; j < f.bubbles.size(); ++j)
      q = std::max(q, q_ij(f.ambient, f.bubbles[i], f.bubbles[j]));
  return q;
}

double family_Q_min_form(const BubbleFamily& f) {
  require_pairable(f);
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.bubbles.size(); ++i)
    for (std::size_t j = i + 1; j < f.bubbles.size(); ++j) {
      const double li = f.bubbles[i].lambda, lj = f.bubbles[j].lambda;
      const double d2 = dist2(f.bubbles[i].z, f.bubbles[j].z);
      q = std::min({q, li / lj, lj / li, 1.0 / (li * lj * d2)});
    }
  return q;
}

ConcentrationRadii R_ij_and_R(const BubbleFamily& f) {
  require_pairable(f);
  const std::size_t nu = f.bubbles.size();
  ConcentrationRadii out;
  out.R_ij.assign(nu, std::vector<double>(nu, 0.0));
  out.R = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < nu; ++j) {
      if (i == j) continue;
      const double li = f.bubbles[i].lambda, lj = f.bubbles[j].lambda;
      const double d = std::sqrt(dist2(f.bubbles[i].z, f.bubbles[j].z));
      const double rij = std::max({std::sqrt(li / lj), std::sqrt(lj / li),
                                   std::sqrt(li * lj) * d});
      out.R_ij[i][j] = rij;
      out.R = std::min(out.R, rij / 2.0);
    }
  return out;
}

PairKind classify_pair(const BubbleFamily& f, int i, int j) {
  require_pairable(f);
  const double li = f.bubbles[i].lambda, lj = f.bubbles[j].lambda;
  const double d = std::sqrt(dist2(f.bubbles[i].z, f.bubbles[j].z));
  const double scale_term = std::max(std::sqrt(li / lj), std::sqrt(lj / li));
  const double dist_term = std::sqrt(li * lj) * d;
  return dist_term > scale_term ? PairKind::Cluster : PairKind::Tower;
}

bool is_delta_interacting(const BubbleFamily& f, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!f.alphas.empty()) {
    for (double a : f.alphas)
      if (std::abs(a - 1.0) > delta) return false;
  }
  if (f.bubbles.size() < 2) return true;
  return family_Q(f) <= delta;
}

nlohmann::json family_to_json(const BubbleFamily& f) {
  nlohmann::json j;
  j["n"] = f.ambient.n;
  j["s"] = f.ambient.s;
  j["bubbles"] = nlohmann::json::array();
  for (const Bubble& b : f.bubbles)
    j["bubbles"].push_back({{"z", b.z}, {"lambda", b.lambda}});
  if (!f.alphas.empty()) j["alphas"] = f.alphas;
  return j;
}

BubbleFamily family_from_json(const nlohmann::json& j) {
  BubbleFamily f;
  f.ambient.n = j.at("n").get<int>();
  f.ambient.s = j.at("s").get<double>();
  f.ambient.validate();
  for (const auto& jb : j.at("bubbles")) {
    Bubble b;
    b.z = jb.at("z").get<std::vector<double>>();
    b.lambda = jb.at("lambda").get<double>();
    if (static_cast<int>(b.z.size()) != f.ambient.n)
      throw std::invalid_argument("bubble center dimension mismatch");
    if (!(b.lambda > 0.0))
      throw std::invalid_argument("bubble scale must be positive");
    f.bubbles.push_back(std::move(b));
  }
  if (f.bubbles.empty()) throw std::invalid_argument("family must be non-empty");
  if (j.contains("alphas")) {
    f.alphas = j.at("alphas").get<std::vector<double>>();
    if (f.alphas.size() != f.bubbles.size())
      throw std::invalid_argument("alphas length mismatch");
  }
  return f;
}

}  // namespace fraclab::bubbles
