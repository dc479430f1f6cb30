// Timing comparison of the OpenMP-parallel task map against the serial
// reference on the two kernels that dominate real runs: pointwise
// fractional-Laplacian evaluation of a radial profile, and pairwise
// inner-product rows of a multi-bubble configuration.

#include "fraclab/bubbles.hpp"
#include "fraclab/fields.hpp"
#include "fraclab/fraclap.hpp"
#include "fraclab/parallel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

namespace {

using namespace fraclab;

double time_of(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void bench(const char* name, std::size_t ntasks,
           const std::function<double(std::size_t)>& task) {
  std::vector<double> serial, parallel;
  const double ts = time_of([&] { serial = serial_map(ntasks, task); });
  const double tp = time_of([&] { parallel = parallel_map(ntasks, task); });
  double diff = 0.0;
  for (std::size_t i = 0; i < ntasks; ++i)
    diff = std::max(diff, std::abs(serial[i] - parallel[i]));
  std::printf("%-28s %4zu tasks  serial %8.3f s  parallel %8.3f s  "
              "speedup %5.2fx  max |diff| %.3g\n",
              name, ntasks, ts, tp, ts / tp, diff);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", max_threads());

  const bubbles::Ambient amb{3, 0.5};
  const quad::QuadratureSpec spec;

  // kernel 1: singular-integral evaluation of (-Delta)^s on a radial profile
  {
    const double m = amb.m();
    fraclap::RadialProfile prof;
    prof.value = [=](double r) { return std::pow(1.0 + r * r, -m); };
    prof.d1 = [=](double r) {
      return -2.0 * m * r * std::pow(1.0 + r * r, -m - 1.0);
    };
    prof.d2 = [=](double r) {
      const double u = 1.0 + r * r;
      return -2.0 * m * std::pow(u, -m - 1.0) +
             4.0 * m * (m + 1.0) * r * r * std::pow(u, -m - 2.0);
    };
    prof.decay_exponent = 2.0 * m;
    const std::size_t N = 96;
    bench("fractional Laplacian", N, [&](std::size_t i) {
      const double r = 1e-2 * std::pow(1e3, double(i) / double(N - 1));
      return fraclap::fraclap_radial_numeric(prof, amb.n, amb.s, r, spec);
    });
  }

  // kernel 2: pairwise inner products of a separated bubble configuration
  {
    std::vector<fields::FunctionRepr> reprs;
    for (int i = 0; i < 6; ++i) {
      fields::FunctionRepr u;
      u.ambient = amb;
      bubbles::Point z(amb.n, 0.0);
      z[0] = 7.0 * i;
      u.bubble_terms.emplace_back(1.0, bubbles::Bubble{z, 1.0 + 0.2 * i});
      reprs.push_back(std::move(u));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < reprs.size(); ++i)
      for (std::size_t j = i; j < reprs.size(); ++j) pairs.push_back({i, j});
    bench("pairwise inner products", pairs.size(), [&](std::size_t k) {
      return fields::hs_inner(reprs[pairs[k].first], reprs[pairs[k].second],
                              spec);
    });
  }
  return 0;
}
