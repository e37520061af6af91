#include <cmath>
#include <numbers>
#include <functional>
#include <set>

#include "cmlab/error.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/special.hpp"
#include "doctest.h"

using namespace cmlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("manifold parsing and equality") {
  CHECK(Manifold::parse("torus:2").dimension() == 2);
  CHECK(Manifold::parse("circle") == Manifold::torus(1));
  CHECK(Manifold::parse("sphere2").is_sphere());
  CHECK(Manifold::parse("sphere2").chart_size() == 3);
  CHECK_THROWS_AS(Manifold::parse("torus:5"), Error);
  CHECK_THROWS_AS(Manifold::parse("torus:0"), Error);
  CHECK_THROWS_AS(Manifold::parse("klein"), Error);
  CHECK(Manifold::parse(Manifold::torus(3).name()) == Manifold::torus(3));
}

TEST_CASE("points are canonicalized") {
  const Point p = make_point(Manifold::torus(2), std::vector<double>{1.25, -0.25});
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));
  const Point q = sphere_point(0.0, 0.0, 3.0);
  CHECK(q[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_point(Manifold::sphere2(), std::vector<double>{0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(make_point(Manifold::torus(2), std::vector<double>{0.1}), Error);
  CHECK_THROWS_AS(make_point(Manifold::torus(1), std::vector<double>{NAN}), Error);
}

TEST_CASE("circle spectrum order: constant, then cos/sin pairs") {
  const auto s = enumerate_spectrum(Manifold::circle(), 7);
  REQUIRE(s.size() == 7);
  CHECK(s[0].lambda == 0.0);
  for (std::size_t i = 1; i < 7; ++i) {
    const auto& t = std::get<TorusLabel>(s[i].label);
    CHECK(t.k[0] == static_cast<int>((i + 1) / 2));
    CHECK(t.sine == (i % 2 == 0));
    CHECK(s[i].lambda == doctest::Approx(2.0 * kPi * t.k[0]));
  }
}

TEST_CASE("torus spectrum is sorted and matches brute-force multiplicities") {
  for (int d = 1; d <= 4; ++d) {
    const auto s = enumerate_spectrum(Manifold::torus(d), 400);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1].lambda <= s[i].lambda);
    // brute-force count of functions with |k|^2 <= R^2 for R below the last value
    const double last = s.back().lambda / (2.0 * kPi);
    const long r2 = static_cast<long>(std::floor(last * last)) - 1;
    std::size_t count = 0;
    const int R = static_cast<int>(std::sqrt(static_cast<double>(r2))) + 1;
    std::array<int, 4> k{};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == d) {
        long n2 = 0;
        for (int i = 0; i < d; ++i) n2 += static_cast<long>(k[i]) * k[i];
        if (n2 <= r2) ++count;  // each k and -k gives one real function
        return;
      }
      for (int v = -R; v <= R; ++v) {
        k[axis] = v;
        rec(axis + 1);
      }
    };
    rec(0);
    std::size_t listed = 0;
    for (const auto& p : s) {
      if (p.lambda <= 2.0 * kPi * std::sqrt(static_cast<double>(r2)) + 1e-9) ++listed;
    }
    CHECK(listed == count);
  }
}

TEST_CASE("sphere spectrum: degree blocks of size 2l+1, zonal first") {
  const auto s = enumerate_spectrum(Manifold::sphere2(), 49);
  std::size_t i = 0;
  for (int l = 0; l <= 6; ++l) {
    for (int j = 0; j < 2 * l + 1; ++j, ++i) {
      const auto& lab = std::get<SphereLabel>(s[i].label);
      CHECK(lab.degree == l);
      CHECK(s[i].lambda == doctest::Approx(std::sqrt(l * (l + 1.0))));
      if (j == 0) CHECK(lab.order == 0);
      else CHECK(lab.order == ((j % 2 == 1) ? (j + 1) / 2 : -(j / 2)));
    }
  }
}

TEST_CASE("torus eigenfunctions are orthonormal on a fine grid") {
  const Manifold m = Manifold::torus(2);
  const auto s = enumerate_spectrum(m, 25);
  const int n = 32;
  std::vector<double> gram(25 * 25, 0.0);
  std::vector<double> vals(25);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Point p = torus_point({(a + 0.3) / n, (b + 0.7) / n});
      for (int i = 0; i < 25; ++i) vals[i] = eval_eigenfunction(m, s[i], p);
      for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 25; ++j) gram[i * 25 + j] += vals[i] * vals[j] / (n * n);
    }
  }
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) CHECK(gram[i * 25 + j] == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("sphere harmonics are orthonormal under a Gauss product rule") {
  const Manifold m = Manifold::sphere2();
  const std::size_t count = 64;  // degrees 0..7
  const auto s = enumerate_spectrum(m, count);
  const auto gl = gauss_legendre(12);
  const int n_phi = 24;
  std::vector<double> gram(count * count, 0.0);
  std::vector<double> vals(count);
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    const double theta = std::acos(gl.nodes[a]);
    for (int b = 0; b < n_phi; ++b) {
      const Point p = sphere_point_polar(theta, 2.0 * kPi * b / n_phi);
      const double w = gl.weights[a] / 2.0 / n_phi;
      for (std::size_t i = 0; i < count; ++i) vals[i] = eval_eigenfunction(m, s[i], p);
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) gram[i * count + j] += w * vals[i] * vals[j];
    }
  }
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      CHECK(gram[i * count + j] == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("sphere harmonics solve the Laplace eigenproblem") {
  // finite-difference Laplace-Beltrami in (theta, phi) at an interior point
  const Manifold m = Manifold::sphere2();
  const auto s = enumerate_spectrum(m, 36);
  const double th = 1.0, ph = 0.6, h = 1e-3;
  for (const auto& p : s) {
    auto f = [&](double t, double q) { return eval_eigenfunction(m, p, sphere_point_polar(t, q)); };
    const double ftt = (f(th + h, ph) - 2 * f(th, ph) + f(th - h, ph)) / (h * h);
    const double ft = (f(th + h, ph) - f(th - h, ph)) / (2 * h);
    const double fpp = (f(th, ph + h) - 2 * f(th, ph) + f(th, ph - h)) / (h * h);
    const double lap = ftt + std::cos(th) / std::sin(th) * ft + fpp / (std::sin(th) * std::sin(th));
    CHECK(-lap == doctest::Approx(p.lambda * p.lambda * f(th, ph)).scale(1.0).epsilon(1e-4));
  }
}

TEST_CASE("Spectrum::evaluate agrees with single evaluations") {
  for (const Manifold& m : {Manifold::torus(3), Manifold::sphere2()}) {
    const auto spec = Spectrum::first(m, 50);
    const Point x = m.is_sphere() ? sphere_point(0.3, -0.2, 0.9) : torus_point({0.1, 0.77, 0.4});
    std::vector<double> out(50);
    spec->evaluate(x, out);
    for (std::size_t i = 0; i < 50; ++i) CHECK(out[i] == doctest::Approx(eval_eigenfunction(m, (*spec)[i], x)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("Weyl counts and sup norms") {
  const auto w1 = weyl_counting_check(Manifold::circle(), 2.0 * kPi * 10.0);
  CHECK(w1.count == 21);
  const auto w2 = weyl_counting_check(Manifold::sphere2(), std::sqrt(12.0));  // l <= 3
  CHECK(w2.count == 16);
  // Weyl: count ~ |B^d| T^d / (2 pi)^d on T^d
  const auto w3 = weyl_counting_check(Manifold::torus(2), 2.0 * kPi * 60.0);
  CHECK(w3.ratio == doctest::Approx(kPi / (4.0 * kPi * kPi)).epsilon(0.02));
  const auto s = enumerate_spectrum(Manifold::torus(1), 3);
  CHECK(sup_norm_sanity(Manifold::torus(1), s[1], 64) == doctest::Approx(std::sqrt(2.0)));
  const auto z = enumerate_spectrum(Manifold::sphere2(), 2);
  CHECK(sup_norm_sanity(Manifold::sphere2(), z[1], 65) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("geodesic distances") {
  CHECK(geodesic_distance(Manifold::torus(1), torus_point({0.05}), torus_point({0.95})) == doctest::Approx(0.1));
  CHECK(geodesic_distance(Manifold::torus(2), torus_point({0.0, 0.0}), torus_point({0.5, 0.5})) == doctest::Approx(std::sqrt(0.5)));
  CHECK(geodesic_distance(Manifold::sphere2(), sphere_point(1, 0, 0), sphere_point(-1, 0, 0)) == doctest::Approx(kPi));
  CHECK(geodesic_distance(Manifold::sphere2(), sphere_point(1, 0, 0), sphere_point(0, 1, 0)) == doctest::Approx(kPi / 2));
}
