#include "doctest.h"

#include "fraclab/parallel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/specfun.hpp"

#include <cmath>

using namespace fraclab;

TEST_CASE("adaptive Gauss-Kronrod on smooth integrands") {
  auto sq = [](double x) { return x * x; };
  CHECK(quad::gk_adaptive(sq, 0.0, 1.0, 1e-14, 1e-12) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  auto s = [](double x) { return std::sin(x); };
  CHECK(quad::gk_adaptive(s, 0.0, M_PI, 1e-14, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-13));
  auto peak = [](double x) { return 1.0 / (1e-4 + x * x); };
  CHECK(quad::gk_adaptive(peak, -1.0, 1.0, 1e-12, 1e-10) ==
        doctest::Approx(2.0 * std::atan(100.0) * 100.0).epsilon(1e-9));
}

TEST_CASE("segment list respects interior kinks") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  CHECK(quad::gk_segments(f, 0.0, 1.0, {0.3}, 1e-14, 1e-12) ==
        doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  auto f = [](double t) { return 1.0 / std::sqrt(t); };
  CHECK(quad::tanh_sinh(f, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-11));
  auto g = [](double t) { return std::log(t); };
  CHECK(quad::tanh_sinh(g, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-11));
  auto h = [](double t) {
    return std::pow(t, -0.25) * std::pow(1.0 - t, -0.5);
  };
  CHECK(quad::tanh_sinh(h, 0.0, 1.0) ==
        doctest::Approx(specfun::beta(0.75, 0.5)).epsilon(2e-8));
}

TEST_CASE("radial integral against the Beta-function oracle") {
  // int_{R^3} (1+|x|^2)^{-3} dx = omega_2 * (1/2) B(3/2, 3/2) = pi^2/4
  quad::QuadratureSpec spec;
  auto f = [](double r) { return std::pow(1.0 + r * r, -3.0); };
  const double oracle =
      specfun::sphere_area(3) * 0.5 * specfun::beta(1.5, 1.5);
  CHECK(oracle == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-13));
  CHECK(quad::integrate_radial(f, 3, 6.0, spec) ==
        doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("radial integral with a slowly decaying tail") {
  // int_{R^3} (1+r^2)^{-2} dx = 4 pi * pi/4 = pi^2
  quad::QuadratureSpec spec;
  auto f = [](double r) { return std::pow(1.0 + r * r, -2.0); };
  CHECK(quad::integrate_radial(f, 3, 4.0, spec) ==
        doctest::Approx(M_PI * M_PI).epsilon(1e-8));
}

TEST_CASE("radial integral of zero is zero") {
  quad::QuadratureSpec spec;
  auto f = [](double) { return 0.0; };
  CHECK(quad::integrate_radial(f, 4, 10.0, spec) == 0.0);
}

TEST_CASE("radial integral rejects non-integrable tails") {
  quad::QuadratureSpec spec;
  auto f = [](double r) { return 1.0 / (1.0 + r * r); };
  CHECK_THROWS_AS(quad::integrate_radial(f, 3, 2.0, spec),
                  quad::QuadratureError);
}

TEST_CASE("parallel and serial block maps agree bitwise") {
  auto work = [](std::size_t i) {
    double acc = 0.0;
    for (int k = 1; k <= 200; ++k)
      acc += std::sin(0.01 * k * (i + 1)) / (k + i + 1.0);
    return acc;
  };
  const auto a = fraclab::serial_map(64, work);
  const auto b = fraclab::parallel_map(64, work);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
