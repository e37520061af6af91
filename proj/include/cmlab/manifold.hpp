#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cmlab {

inline constexpr int kMaxTorusDimension = 4;

/// A compact manifold with an explicit Laplace-Beltrami spectrum: the flat
/// torus T^d = R^d / Z^d (d <= 4), the circle (identical to T^1), or the
/// round 2-sphere. All carry the normalized measure mu(M) = 1.
class Manifold {
 public:
  enum class Kind { Torus, Circle, Sphere2 };

  static Manifold torus(int d);
  static Manifold circle();
  static Manifold sphere2();

  /// Parses "torus:d", "circle" or "sphere2".
  static Manifold parse(std::string_view text);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  bool is_sphere() const { return kind_ == Kind::Sphere2; }
  /// Number of chart coordinates of a point: d for tori, 3 for the sphere.
  int chart_size() const { return is_sphere() ? 3 : dim_; }
  std::string name() const;

  /// Circle and Torus(1) compare equal: they are the same space.
  friend bool operator==(const Manifold& a, const Manifold& b) {
    return a.is_sphere() == b.is_sphere() && a.dim_ == b.dim_;
  }

 private:
  Manifold(Kind kind, int dim) : kind_(kind), dim_(dim) {}
  Kind kind_;
  int dim_;
};

/// Point in chart coordinates: torus coordinates in [0, 1), or a unit
/// 3-vector on the sphere. Only the first `size` entries are meaningful.
struct Point {
  std::array<double, 4> coords{};
  std::uint8_t size = 0;

  double operator[](std::size_t i) const { return coords[i]; }
  std::span<const double> view() const { return {coords.data(), size}; }
};

/// Validates and canonicalizes chart coordinates: torus coordinates reduced
/// mod 1, sphere vectors (any nonzero finite 3-vector) normalized.
Point make_point(const Manifold& m, std::span<const double> coords);
Point torus_point(std::initializer_list<double> coords);
Point sphere_point(double x, double y, double z);
/// Sphere point from colatitude theta and azimuth phi.
Point sphere_point_polar(double theta, double phi);

/// Torus eigenfunction label: frequency k (half-lattice representative) and
/// trigonometric part. k = 0 is the constant function.
struct TorusLabel {
  std::array<int, 4> k{};
  bool sine = false;
  friend bool operator==(const TorusLabel&, const TorusLabel&) = default;
};

/// Real spherical harmonic label: degree l and signed order m
/// (m > 0 cosine part, m = 0 zonal, m < 0 sine part of order |m|).
struct SphereLabel {
  int degree = 0;
  int order = 0;
  friend bool operator==(const SphereLabel&, const SphereLabel&) = default;
};

using EigenLabel = std::variant<TorusLabel, SphereLabel>;

struct EigenPair {
  std::size_t index = 0;
  double lambda = 0.0;  // frequency: square root of the Laplace eigenvalue
  EigenLabel label;
};

std::string describe(const EigenLabel& label, int dim);

/// First `count` eigenpairs in nondecreasing lambda.
///
/// Ties on the torus are broken by (|k|^2, lexicographic k), cosine before
/// sine; on the sphere by degree, then zonal, then (cos m, sin m) for
/// m = 1..l.
std::vector<EigenPair> enumerate_spectrum(const Manifold& m, std::size_t count);

/// All eigenpairs with lambda strictly below `frequency`.
std::vector<EigenPair> enumerate_below(const Manifold& m, double frequency);

double eval_eigenfunction(const Manifold& m, const EigenPair& pair, const Point& x);

/// Immutable enumerated spectrum with a bulk evaluator. Cheap to share
/// between threads.
class Spectrum {
 public:
  Spectrum(Manifold m, std::vector<EigenPair> pairs);
  static std::shared_ptr<const Spectrum> first(const Manifold& m, std::size_t count);

  const Manifold& manifold() const { return manifold_; }
  std::size_t size() const { return pairs_.size(); }
  const EigenPair& operator[](std::size_t i) const { return pairs_[i]; }
  std::span<const EigenPair> pairs() const { return pairs_; }

  /// Writes phi_m(x) for m = 0..out.size()-1 (out.size() <= size()).
  void evaluate(const Point& x, std::span<double> out) const;

 private:
  Manifold manifold_;
  std::vector<EigenPair> pairs_;
};

double geodesic_distance(const Manifold& m, const Point& x, const Point& y);

struct WeylCount {
  std::size_t count = 0;
  double ratio = 0.0;  // count / T^d
};

/// Counts eigenpairs with lambda <= T directly from the lattice / degree
/// structure (independent of enumerate_spectrum).
WeylCount weyl_counting_check(const Manifold& m, double T);

/// max |phi| over a uniform grid: resolution^d nodes on the torus, a
/// resolution x resolution (theta, phi) grid including both poles on the
/// sphere.
double sup_norm_sanity(const Manifold& m, const EigenPair& pair, int grid_resolution);

}  // namespace cmlab
