#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cmlab/error.hpp"
#include "cmlab/integrate.hpp"
#include "cmlab/kernels.hpp"
#include "cmlab/special.hpp"
#include "doctest.h"

using namespace cmlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("smooth step") {
  CHECK(smooth_step(-0.3) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(1.7) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double t = 0.05; t < 1.0; t += 0.05) {
    CHECK(smooth_step(t) + smooth_step(1.0 - t) == doctest::Approx(1.0));
    CHECK(smooth_step(t) <= smooth_step(t + 0.01));
  }
}

TEST_CASE("psi has unit L2 norm and positive integral") {
  for (int d = 1; d <= 4; ++d) {
    const KernelSuite k = build_kernel_suite(d, 10.0);
    const auto& psi = k.psi();
    CHECK(psi.support_radius() == doctest::Approx(0.5));
    const double norm2 = unit_sphere_area(d) * integrate_adaptive([&](double s) { return psi(s) * psi(s) * std::pow(s, d - 1); }, 0.0, 0.5);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fourier_radial(psi, 0.0) > 0.0);
  }
}

TEST_CASE("H is the autocorrelation of psi (direct convolution on the line)") {
  const KernelSuite k = build_kernel_suite(1, 10.0);
  const auto& psi = k.psi();
  for (double r : {0.0, 0.1, 0.37, 0.62, 0.9}) {
    const double lo = std::max(-0.5, r - 0.5), hi = std::min(0.5, r + 0.5);
    const double conv = integrate_adaptive([&](double s) { return psi(std::abs(s)) * psi(std::abs(r - s)); }, lo, hi);
    CHECK(k.H()(r) == doctest::Approx(conv).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("kernel invariants in every dimension") {
  for (int d = 1; d <= 4; ++d) {
    const KernelSuite k = build_kernel_suite(d, 15.0, 0.5);
    CAPTURE(d);
    CHECK(k.H()(0.0) == doctest::Approx(1.0).epsilon(1e-8));
    double hmax = 0.0;
    for (int i = 0; i <= 2000; ++i) hmax = std::max(hmax, k.H()(i / 2000.0));
    CHECK(hmax <= 1.0 + 1e-8);
    CHECK(k.H().support_radius() <= 1.0);
    CHECK(k.H()(1.2) == 0.0);
    for (double r : {1.01, 1.2, 1.6}) CHECK(std::abs(k.H_spectral(r)) < 1e-10);
    for (double r : {0.1, 0.5, 0.8}) CHECK(k.H_spectral(r) == doctest::Approx(k.H()(r)).scale(1.0).epsilon(1e-8));
    for (int i = 0; i < 200; ++i) {
      const double rho = 12.0 * i / 199.0;
      CHECK(k.fourier_H()(rho) >= -1e-10);
    }
    for (double rho : {0.0, 0.7, 2.5}) {
      const double fpsi = fourier_radial(k.psi(), rho);
      CHECK(k.fourier_H()(rho) == doctest::Approx(fpsi * fpsi).scale(1.0).epsilon(1e-9));
      CHECK(k.fourier_psi(rho) == doctest::Approx(fpsi).scale(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("phi plateau and support") {
  const double eps = 0.5;
  const KernelSuite k = build_kernel_suite(2, 20.0, eps);
  const double inner = eps / (4.0 * kPi), outer = eps / (2.0 * kPi);
  for (int i = 0; i <= 20; ++i) CHECK(k.phi()(inner * i / 20.0) == 1.0);
  CHECK(k.phi()(outer) == 0.0);
  CHECK(k.phi()(outer * 1.5) == 0.0);
  CHECK(k.phi()(0.5 * (inner + outer)) == doctest::Approx(0.5));
  CHECK(k.fourier_H_tilde().support_radius() <= outer);
  // G = lambda^d F_d H(lambda rho) phi(rho)
  for (double rho : {0.0, 0.02, 0.05, 0.07}) {
    CHECK(k.fourier_H_tilde()(rho) == doctest::Approx(400.0 * k.fourier_H()(20.0 * rho) * k.phi()(rho)).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("H tilde at the origin integrates its transform") {
  const KernelSuite k = build_kernel_suite(2, 20.0, 0.5);
  const auto& G = k.fourier_H_tilde();
  const double outer = 0.5 / (2.0 * kPi);
  const double ref = 2.0 * kPi * integrate_panels([&](double r) { return G(r) * r; }, 0.0, outer, outer / 64.0);
  CHECK(k.H_tilde()(0.0) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("support lemma across parameters") {
  for (int d : {1, 2, 3}) {
    for (double lambda : {5.0, 20.0, 60.0}) {
      for (double eps : {0.25, 0.5, 1.0}) {
        const KernelSuite k = build_kernel_suite(d, lambda, eps);
        const auto rep = verify_support_lemma(k, support_lemma_grid(eps, 200));
        CAPTURE(d);
        CAPTURE(lambda);
        CAPTURE(eps);
        CHECK(rep.peak > 0.0);
        CHECK(rep.max_tail <= 1e-6);
        CHECK(rep.max_violation_neg <= 1e-6);
        CHECK(rep.grid_points == 201);
      }
    }
  }
}

TEST_CASE("support lemma needs a grid reaching 4 eps") {
  const KernelSuite k = build_kernel_suite(2, 10.0, 0.5);
  const auto short_grid = support_lemma_grid(0.25, 50);
  CHECK_THROWS_AS(verify_support_lemma(k, short_grid), Error);
}

TEST_CASE("omega0 is nonnegative and vanishes past eps") {
  const KernelSuite k = build_kernel_suite(2, 20.0, 0.5);
  for (int i = 0; i <= 100; ++i) CHECK(k.omega0(0.5 * i / 100.0) >= 0.0);
  CHECK(k.omega0(0.51) == 0.0);
  CHECK(k.omega0(0.0) == doctest::Approx(2.0 / (4.0 * kPi * kPi) * 400.0 * k.fourier_H()(0.0)).epsilon(1e-12));
}

TEST_CASE("suite validation") {
  CHECK_THROWS_AS(build_kernel_suite(0, 10.0), Error);
  CHECK_THROWS_AS(build_kernel_suite(5, 10.0), Error);
  CHECK_THROWS_AS(build_kernel_suite(2, 0.0), Error);
  CHECK_THROWS_AS(build_kernel_suite(2, 10.0, 0.0), Error);
  CHECK_THROWS_AS(build_kernel_suite(2, 10.0, 1.5), Error);
  try {
    build_kernel_suite(6, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == "unsupported_dimension");
  }
}

TEST_CASE("profile CSV export") {
  const KernelSuite k = build_kernel_suite(1, 10.0);
  const auto path = (std::filesystem::temp_directory_path() / "cmlab_profile_test.csv").string();
  write_profile_csv(k.H(), 1.0, 8, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 9);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_profile_csv(k.H(), 1.0, 8, "/nonexistent/dir/x.csv"), Error);
}
