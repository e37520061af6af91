#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmlab/functional.hpp"
#include "cmlab/manifold.hpp"

namespace cmlab {

/// Axis-aligned torus cell [lo_i, hi_i) in each coordinate.
struct TorusCell {
  std::array<double, 4> lo{};
  std::array<double, 4> hi{};
};

/// Sphere region: colatitude band [theta_lo, theta_hi) and azimuth sector
/// [phi_lo, phi_hi) in [0, 2pi). The southernmost band is closed at pi.
struct SphereCell {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  int collar = 0;  // 0 = north cap, collars 1..n, last = south cap
};

struct Region {
  Point center;
  double inner_radius = 0.0;  // a geodesic ball of this radius about center lies inside
  double outer_radius = 0.0;  // the region lies inside the ball of this radius
  double measure = 0.0;       // analytic normalized measure
  TorusCell torus;
  SphereCell sphere;
};

/// Y regions of equal measure 1/Y.
///
/// Torus: a perfect d-th power Y gives the regular grid; any other Y is
/// built by splitting the longest side of a box holding c regions in the
/// ratio floor(c/2) : ceil(c/2), recursively, so every leaf box has volume
/// exactly 1/Y and bounded aspect ratio.
///
/// Sphere: two polar caps of measure 1/Y and collars between them whose
/// region counts are rounded from the ideal (carrying the rounding error
/// forward); collar boundaries are then placed so that each collar holds
/// exactly its count of measure-1/Y sectors.
class Partition {
 public:
  static Partition equal_measure(const Manifold& m, std::size_t Y);

  const Manifold& manifold() const { return manifold_; }
  std::size_t size() const { return regions_.size(); }
  const Region& operator[](std::size_t r) const { return regions_[r]; }
  std::span<const Region> regions() const { return regions_; }
  /// Sector counts per band, north cap first (sphere only).
  const std::vector<std::size_t>& band_counts() const { return band_counts_; }

  /// Region containing x (half-open boundaries, increasing side excluded).
  /// Throws Error("point_outside_regions") if none claims it.
  std::size_t locate(const Point& x) const;
  /// Direct membership test, independent of locate().
  bool contains(std::size_t r, const Point& x) const;

 private:
  explicit Partition(Manifold m) : manifold_(m) {}
  Manifold manifold_;
  std::vector<Region> regions_;
  std::vector<std::size_t> band_counts_;
  std::vector<double> band_edges_;         // sphere colatitude edges, size bands + 1
  std::vector<std::size_t> band_offsets_;  // first region index of each band
  std::size_t grid_side_ = 0;              // torus regular grid side, 0 if not a grid
};

struct RegionBucket {
  std::size_t region = 0;
  std::size_t K = 0;  // number of points
  double S = 0.0;     // weight sum
  std::vector<std::size_t> members;
};

/// Nonempty buckets sorted by S descending (ties by region index).
std::vector<RegionBucket> bucket_points(const Partition& partition, const WeightedPointSet& pts);

struct PartitionCheck {
  std::size_t Y = 0;
  std::size_t samples = 0;
  std::vector<double> measure_errors;  // MC fraction minus 1/Y, per region
  double max_sigma = 0.0;              // largest |error| in binomial standard deviations
  double max_analytic_error = 0.0;     // max |measure - 1/Y|
  double analytic_total = 0.0;         // sum of analytic measures
  double cover_fraction = 0.0;         // fraction of samples claimed by exactly one region
  double c1_hat = 0.0;                 // min inner radius * Y^{1/d}
  double c2_hat = 0.0;                 // max outer radius * Y^{1/d}
};

/// Monte Carlo audit of measures and of the disjoint cover (every sample is
/// tested against every region), plus the radius constants. samples >= 1e4.
PartitionCheck verify_partition(const Partition& partition, std::size_t samples,
                                std::uint64_t seed);

}  // namespace cmlab
