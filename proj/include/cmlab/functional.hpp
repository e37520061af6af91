#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmlab/kernels.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/point_families.hpp"
#include "cmlab/radial.hpp"

namespace cmlab {

/// Points on one manifold with strictly positive weights.
struct WeightedPointSet {
  Manifold manifold = Manifold::circle();
  std::vector<Point> points;
  std::vector<double> weights;

  /// Validates: N >= 1, matching lengths, points of the right chart size,
  /// finite positive weights.
  static WeightedPointSet make(Manifold m, std::vector<Point> points, std::vector<double> weights);
  /// Uniform weights 1/N.
  static WeightedPointSet uniform(Manifold m, std::vector<Point> points);

  std::size_t size() const { return points.size(); }
};

enum class Truncation { Index, Frequency };
std::string truncation_name(Truncation t);

struct BoundReport {
  std::string manifold;
  std::size_t X = 0;
  std::size_t N = 0;
  double S = 0.0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double lower_trivial = 0.0;  // (sum a)^2
  std::optional<double> ratio;  // S / (X sum a^2), absent for X = 0
  double lambda_X = 0.0;        // frequency of the last included eigenfunction
  Truncation truncation = Truncation::Index;
  std::optional<std::uint64_t> seed;
  bool overflow_warning = false;  // |S| > 1e300
};

/// c_m = sum_j a_j phi_m(x_j) for m = 0..count-1. Weights may have any sign.
/// Deterministic: points are reduced in fixed blocks, each block with
/// compensated sums, and blocks are combined in index order.
std::vector<double> spectral_coefficients(const Spectrum& spectrum, std::span<const Point> points,
                                          std::span<const double> weights);

/// S = sum_{m=0}^{X} c_m^2 (truncation by index).
BoundReport spectral_sum(const WeightedPointSet& pts, std::size_t X);

/// Frequency lambda_X of the eigenfunction with index X.
double frequency_at_index(const Manifold& m, std::size_t X);

/// sum over lambda_m < lambda_X of kernel(lambda_m / lambda_X) c_m^2.
double smoothed_sum(const WeightedPointSet& pts, const RadialProfile& kernel, double lambda_X);
/// Same with the suite's H and lambda_X.
double smoothed_sum(const WeightedPointSet& pts, const KernelSuite& suite);

/// F_X(x, y) = sum over k in Z^d with 2 pi |k| < lambda_X of
/// kernel(2 pi |k| / lambda_X) cos(2 pi k.(x - y)), summed over the full
/// lattice. d <= 3 and lambda_X / 2 pi <= 60.
double torus_kernel_oracle(int d, const RadialProfile& kernel, double lambda_X, const Point& x,
                           const Point& y);
double torus_kernel_oracle(int d, const KernelSuite& suite, const Point& x, const Point& y);

struct ExpectationResult {
  double mean = 0.0;
  double std_err = 0.0;
  double target = 0.0;  // X sum a^2
  double min = 0.0;     // smallest Phi over the trials
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of E[Phi], Phi = sum_{m=1}^{X} c_m^2, over i.i.d.
/// uniform points. Trial t draws from stream t of the seed, so results do
/// not depend on scheduling. trials >= 100.
ExpectationResult expectation_mc(const Manifold& m, std::size_t X, std::span<const double> weights,
                                 std::size_t trials, std::uint64_t seed);

struct SweepConfig {
  Manifold manifold = Manifold::circle();
  std::vector<PointFamily> families;
  std::vector<std::size_t> X_list;
  WeightMode weight_mode = WeightMode::Uniform;
  std::uint64_t seed = 0;
  std::size_t instances = 50;
  std::optional<std::size_t> N;  // fixed size; otherwise drawn from [max(1, X/4), 2X]
};

struct SweepRow {
  PointFamily family = PointFamily::Random;
  std::size_t X = 0;
  std::size_t instance = 0;
  std::size_t N = 0;
  double S = 0.0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double ratio = 0.0;        // S / (X sum a^2)
  double upper_ratio = 0.0;  // S / (X sum a^2 + (sum a)^2)
};

struct SweepCell {
  PointFamily family = PointFamily::Random;
  std::size_t X = 0;
  double min_ratio = 0.0;
  double min_upper_ratio = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;    // sorted by (X, family, instance)
  std::vector<SweepCell> cells;  // sorted by (X, family)
  double c_hat = 0.0;            // global minimum ratio
  /// Least-squares slope of log(min ratio over families) against log X;
  /// absent with fewer than two X values.
  std::optional<double> log_slope;
};

SweepResult empirical_constant_sweep(const SweepConfig& config);

}  // namespace cmlab
