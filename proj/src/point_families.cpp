#include "cmlab/point_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cmlab/error.hpp"

namespace cmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;  // (sqrt 5 - 1) / 2
constexpr double kTorusSpread = 0.02;
constexpr double kSphereSpread = 0.05;

double frac(double x) { return x - std::floor(x); }

// Generator vector (1, g, g^2, ...) mod n with g the integer nearest to
// golden * n that is coprime to n.
std::array<long, 4> lattice_generator(long n, int d) {
  long g = std::max(1L, std::lround(kGolden * static_cast<double>(n)));
  while (n > 1 && std::gcd(g, n) != 1) ++g;
  std::array<long, 4> z{1, 0, 0, 0};
  for (int i = 1; i < d; ++i) z[i] = (z[i - 1] * g) % std::max(1L, n);
  return z;
}

std::vector<Point> torus_lattice(int d, std::size_t n) {
  std::vector<Point> pts;
  pts.reserve(n);
  const auto nl = static_cast<long>(n);
  const auto z = lattice_generator(nl, d);
  for (long j = 0; j < nl; ++j) {
    std::array<double, 4> c{};
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<double>((j * z[i]) % nl) / static_cast<double>(nl);
    }
    pts.push_back(make_point(Manifold::torus(d), std::span<const double>(c.data(), d)));
  }
  return pts;
}

Point fibonacci_sphere(std::size_t j, std::size_t n) {
  const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(n);
  const double phi = 2.0 * kPi * frac(static_cast<double>(j) * kGolden);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return sphere_point(r * std::cos(phi), r * std::sin(phi), z);
}

// Random tangent displacement of length-scale `spread` at p.
Point sphere_perturb(const Point& p, double spread, CounterRng& rng, bool gaussian) {
  double v[3];
  for (double& c : v) c = gaussian ? rng.normal() : rng.uniform(-1.0, 1.0);
  const double dot = v[0] * p[0] + v[1] * p[1] + v[2] * p[2];
  for (int i = 0; i < 3; ++i) v[i] -= dot * p[i];
  return sphere_point(p[0] + spread * v[0], p[1] + spread * v[1], p[2] + spread * v[2]);
}

}  // namespace

std::string_view family_name(PointFamily f) {
  switch (f) {
    case PointFamily::Random: return "random";
    case PointFamily::Lattice: return "lattice";
    case PointFamily::Jittered: return "jittered";
    case PointFamily::Clustered: return "clustered";
  }
  return "?";
}

PointFamily parse_family(std::string_view name) {
  for (auto f : {PointFamily::Random, PointFamily::Lattice, PointFamily::Jittered,
                 PointFamily::Clustered}) {
    if (family_name(f) == name) return f;
  }
  throw invalid_argument("unknown point family '" + std::string(name) + "'");
}

std::vector<PointFamily> parse_families(std::string_view list) {
  if (list == "all") {
    return {PointFamily::Random, PointFamily::Lattice, PointFamily::Jittered,
            PointFamily::Clustered};
  }
  std::vector<PointFamily> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    out.push_back(parse_family(list.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw invalid_argument("empty point-family list");
  return out;
}

Point random_point(const Manifold& m, CounterRng& rng) {
  if (m.is_sphere()) {
    for (;;) {
      const double x = rng.normal(), y = rng.normal(), z = rng.normal();
      if (x * x + y * y + z * z > 1e-20) return sphere_point(x, y, z);
    }
  }
  std::array<double, 4> c{};
  for (int i = 0; i < m.dimension(); ++i) c[i] = rng.uniform();
  return make_point(m, std::span<const double>(c.data(), m.dimension()));
}

std::vector<Point> generate_points(const Manifold& m, PointFamily family, std::size_t n,
                                   CounterRng& rng) {
  if (n == 0) throw invalid_argument("point families need N >= 1");
  std::vector<Point> pts;
  pts.reserve(n);
  const int d = m.dimension();
  switch (family) {
    case PointFamily::Random:
      for (std::size_t j = 0; j < n; ++j) pts.push_back(random_point(m, rng));
      break;
    case PointFamily::Lattice:
      if (m.is_sphere()) {
        for (std::size_t j = 0; j < n; ++j) pts.push_back(fibonacci_sphere(j, n));
      } else {
        pts = torus_lattice(d, n);
      }
      break;
    case PointFamily::Jittered:
      if (m.is_sphere()) {
        const double cell = std::sqrt(4.0 * kPi / static_cast<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
          pts.push_back(sphere_perturb(fibonacci_sphere(j, n), 0.5 * cell, rng, false));
        }
      } else {
        // a lattice cell has side about N^{-1/d}
        const double cell = std::pow(static_cast<double>(n), -1.0 / d);
        for (const Point& p : torus_lattice(d, n)) {
          std::array<double, 4> c{};
          for (int i = 0; i < d; ++i) c[i] = p[i] + cell * rng.uniform(-0.5, 0.5);
          pts.push_back(make_point(m, std::span<const double>(c.data(), d)));
        }
      }
      break;
    case PointFamily::Clustered: {
      const std::size_t clusters = 1 + n / 8;
      std::vector<Point> centres;
      for (std::size_t c = 0; c < clusters; ++c) centres.push_back(random_point(m, rng));
      for (std::size_t j = 0; j < n; ++j) {
        const Point& centre = centres[j % clusters];
        if (m.is_sphere()) {
          pts.push_back(sphere_perturb(centre, kSphereSpread, rng, true));
        } else {
          std::array<double, 4> c{};
          for (int i = 0; i < d; ++i) c[i] = centre[i] + kTorusSpread * rng.normal();
          pts.push_back(make_point(m, std::span<const double>(c.data(), d)));
        }
      }
      break;
    }
  }
  return pts;
}

std::string_view weight_mode_name(WeightMode w) {
  return w == WeightMode::Uniform ? "uniform" : "random";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "uniform") return WeightMode::Uniform;
  if (name == "random") return WeightMode::Random;
  throw invalid_argument("weight mode must be 'uniform' or 'random', got '" + std::string(name) +
                         "'");
}

std::vector<double> generate_weights(WeightMode mode, std::size_t n, CounterRng& rng) {
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (mode == WeightMode::Random) {
    double total = 0.0;
    for (double& v : w) {
      v = 0.1 + 0.9 * rng.uniform();
      total += v;
    }
    for (double& v : w) v /= total;
  }
  return w;
}

}  // namespace cmlab
