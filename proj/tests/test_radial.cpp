#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "cmlab/error.hpp"
#include "cmlab/integrate.hpp"
#include "cmlab/radial.hpp"
#include "doctest.h"

using namespace cmlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("adaptive and panel integration") {
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(integrate_panels([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, 0.05) ==
        doctest::Approx(std::sin(120.0) / 40.0).epsilon(1e-12));
  const auto rule = CompositeRule::make(0.0, 2.0, 8, 6);
  CHECK(rule.apply([](double x) { return x * x * x * x * x; }) == doctest::Approx(64.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("cubic spline reproduces smooth data") {
  std::vector<double> v;
  const double h = 0.01;
  for (int i = 0; i <= 200; ++i) v.push_back(std::cos(i * h));
  const CubicSplineGrid g(h, v, -std::sin(2.0));
  for (double r : {0.0, 0.005, 0.333, 1.2345, 1.999}) CHECK(g(r) == doctest::Approx(std::cos(r)).epsilon(1e-9));
}

TEST_CASE("hankel kernel matches J_nu(z)/z^nu") {
  for (int d = 1; d <= 4; ++d) {
    const double nu = (d - 2) / 2.0;
    for (double z : {0.01, 0.7, 3.3, 12.0, 40.0}) {
      CHECK(hankel_kernel(d, z) == doctest::Approx(boost::math::cyl_bessel_j(nu, z) / std::pow(z, nu)).epsilon(1e-11).scale(1e-3));
    }
  }
}

TEST_CASE("Gaussian is its own radial Fourier transform") {
  for (int d = 1; d <= 4; ++d) {
    const auto g = RadialProfile::gaussian(d);
    for (double rho : {0.0, 0.2, 0.6, 1.1, 1.9}) {
      CHECK(fourier_radial(g, rho) == doctest::Approx(std::exp(-kPi * rho * rho)).epsilon(1e-10).scale(1e-10));
    }
  }
}

TEST_CASE("transform of a dilated Gaussian") {
  // exp(-pi a r^2) -> a^{-d/2} exp(-pi rho^2 / a)
  const double a = 0.4;
  for (int d = 1; d <= 3; ++d) {
    RadialProfile f(d, INFINITY, 12.0, [a](double r) { return std::exp(-kPi * a * r * r); }, "dilated");
    for (double rho : {0.0, 0.3, 0.9}) {
      CHECK(fourier_radial(f, rho) == doctest::Approx(std::pow(a, -d / 2.0) * std::exp(-kPi * rho * rho / a)).epsilon(1e-10));
    }
  }
}

TEST_CASE("indicator transforms in closed form") {
  // d = 1: sin(2 pi R rho) / (pi rho); d = 3: ball transform via J_{3/2}
  const double R = 0.7;
  for (double rho : {0.13, 0.5, 1.7}) {
    const auto f1 = RadialProfile::indicator(1, R);
    CHECK(fourier_radial(f1, rho) == doctest::Approx(std::sin(2 * kPi * R * rho) / (kPi * rho)).epsilon(1e-11));
    const auto f3 = RadialProfile::indicator(3, R);
    const double ref3 = std::pow(R / rho, 1.5) * boost::math::cyl_bessel_j(1.5, 2 * kPi * R * rho);
    CHECK(fourier_radial(f3, rho) == doctest::Approx(ref3).epsilon(1e-10));
    const auto f2 = RadialProfile::indicator(2, R);
    const double ref2 = R / rho * boost::math::cyl_bessel_j(1.0, 2 * kPi * R * rho);
    CHECK(fourier_radial(f2, rho) == doctest::Approx(ref2).epsilon(1e-10));
  }
  CHECK(fourier_radial(RadialProfile::indicator(3, R), 0.0) == doctest::Approx(4.0 / 3.0 * kPi * R * R * R));
}

TEST_CASE("Hankel round trip of a compact bump") {
  for (int d = 1; d <= 4; ++d) {
    const auto f = RadialProfile::bump(d, 1.0, 2.0);
    const auto Ff = fourier_profile(f, 40.0);
    for (double r : {0.0, 0.3, 0.6, 0.85}) CHECK(fourier_radial(Ff, r) == doctest::Approx(f(r)).scale(1.0).epsilon(1e-5));
  }
}

TEST_CASE("cosine pair") {
  // C[exp(-s)](t) = 1 / (1 + t^2)
  RadialProfile e(1, INFINITY, 45.0, [](double s) { return std::exp(-s); }, "exp");
  for (double t : {0.0, 0.5, 2.0, 7.0}) CHECK(cosine_transform(e, t) == doctest::Approx(1.0 / (1.0 + t * t)).epsilon(1e-12));
  const auto g = RadialProfile::gaussian(1);
  const auto Cg = cosine_profile(g, 30.0);
  for (double s : {0.0, 0.4, 1.3}) CHECK(inverse_cosine_transform(Cg, s) == doctest::Approx(g(s)).scale(1.0).epsilon(1e-8));
}

TEST_CASE("cosine transform closed forms and its relation to F_1") {
  const auto g = RadialProfile::gaussian(1);
  for (double t : {0.0, 1.0, 3.5, 9.0}) {
    CHECK(cosine_transform(g, t) == doctest::Approx(0.5 * std::exp(-t * t / (4.0 * kPi))).epsilon(1e-12));
    CHECK(cosine_transform(g, t) == doctest::Approx(0.5 * fourier_radial(g, t / (2.0 * kPi))).epsilon(1e-8));
  }
  const auto box = RadialProfile::indicator(1, 1.0);
  for (double t : {0.3, 2.0, 11.0}) CHECK(cosine_transform(box, t) == doctest::Approx(std::sin(t) / t).epsilon(1e-12));
}

TEST_CASE("cosine round trip of a bump") {
  const auto b = RadialProfile::bump(1, 0.5, 3.0);
  const auto Cb = cosine_profile(b, 400.0);
  for (double s : {0.0, 0.1, 0.25, 0.4}) CHECK(inverse_cosine_transform(Cb, s) == doctest::Approx(b(s)).scale(1.0).epsilon(1e-6));
}

TEST_CASE("transplant vanishes beyond the support and stays nonnegative for g >= 0") {
  const auto b = RadialProfile::bump(3, 0.8);
  CHECK(transplant(b, 1, 0.9) == 0.0);
  for (double s : {0.0, 0.2, 0.5, 0.79}) CHECK(transplant(b, 1, s) >= 0.0);
}

TEST_CASE("transplantation constant has the closed form 2 pi^{k/2} / Gamma(k/2)") {
  for (auto [d, dp] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}}) {
    const double k = d - dp;
    CHECK(transplant_constant(d, dp) == doctest::Approx(2.0 * std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("transplantation identity away from the calibration point") {
  for (auto [d, dp] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    RadialProfile g(d, INFINITY, 8.0, [](double r) { return (1.0 + r * r) * std::exp(-kPi * r * r); }, "poly-gauss");
    for (double s : {0.1, 0.55, 1.0}) {
      CHECK(double_transform(g, dp, s, 8.0) == doctest::Approx(transplant(g, dp, s)).epsilon(1e-8));
    }
  }
}

TEST_CASE("radial profile validation") {
  CHECK_THROWS_AS(RadialProfile::gaussian(0), Error);
  CHECK_THROWS_AS(RadialProfile::bump(2, -1.0), Error);
  const auto b = RadialProfile::bump(2, 0.5);
  CHECK(b(0.5) == 0.0);
  CHECK(b(0.7) == 0.0);
  CHECK(b(0.0) == doctest::Approx(std::exp(-1.0)));
}
