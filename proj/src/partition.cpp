#include "cmlab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmlab/error.hpp"
#include "cmlab/point_families.hpp"
#include "cmlab/rng.hpp"
#include "cmlab/summation.hpp"

namespace cmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct Angles {
  double theta;
  double phi;
};

Angles angles_of(const Point& x) {
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return {std::atan2(std::hypot(x[0], x[1]), x[2]), phi};
}

bool sphere_cell_contains(const SphereCell& c, const Angles& a, bool last_band) {
  const bool in_band = a.theta >= c.theta_lo && (last_band ? a.theta <= c.theta_hi : a.theta < c.theta_hi);
  return in_band && a.phi >= c.phi_lo && a.phi < c.phi_hi;
}

bool torus_cell_contains(const TorusCell& c, const Point& x, int d) {
  for (int i = 0; i < d; ++i) {
    if (!(x[i] >= c.lo[i] && x[i] < c.hi[i])) return false;
  }
  return true;
}

// exact integer d-th root of y if it exists
std::size_t integer_root(std::size_t y, int d) {
  auto n = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(y), 1.0 / d)));
  for (std::size_t cand : {n - (n > 0 ? 1 : 0), n, n + 1}) {
    std::size_t p = 1;
    for (int i = 0; i < d; ++i) p *= cand;
    if (p == y) return cand;
  }
  return 0;
}

void finish_torus_region(Region& r, int d) {
  double vol = 1.0, min_side = 1.0, diag2 = 0.0;
  std::array<double, 4> c{};
  for (int i = 0; i < d; ++i) {
    const double side = r.torus.hi[i] - r.torus.lo[i];
    vol *= side;
    min_side = std::min(min_side, side);
    diag2 += side * side;
    c[i] = 0.5 * (r.torus.lo[i] + r.torus.hi[i]);
  }
  r.center = make_point(Manifold::torus(d), std::span<const double>(c.data(), d));
  r.measure = vol;
  r.inner_radius = 0.5 * min_side;
  r.outer_radius = 0.5 * std::sqrt(diag2);
}

void split_box(TorusCell box, std::size_t count, int d, std::vector<Region>& out) {
  if (count == 1) {
    Region r;
    r.torus = box;
    finish_torus_region(r, d);
    out.push_back(r);
    return;
  }
  int axis = 0;
  for (int i = 1; i < d; ++i) {
    if (box.hi[i] - box.lo[i] > box.hi[axis] - box.lo[axis]) axis = i;
  }
  const std::size_t left = count / 2;
  const double cut = box.lo[axis] + (box.hi[axis] - box.lo[axis]) * static_cast<double>(left) /
                                        static_cast<double>(count);
  TorusCell a = box, b = box;
  a.hi[axis] = cut;
  b.lo[axis] = cut;
  split_box(a, left, d, out);
  split_box(b, count - left, d, out);
}

Point polar_point(double theta, double phi) { return sphere_point_polar(theta, phi); }

double sphere_distance(double t1, double p1, double t2, double p2) {
  return geodesic_distance(Manifold::sphere2(), polar_point(t1, p1), polar_point(t2, p2));
}

void finish_sphere_region(Region& r, std::size_t sectors) {
  const SphereCell& c = r.sphere;
  const double cos_lo = std::cos(c.theta_lo), cos_hi = std::cos(c.theta_hi);
  r.measure = 0.5 * (cos_lo - cos_hi) / static_cast<double>(sectors);
  if (c.theta_lo == 0.0) {  // north cap
    r.center = sphere_point(0.0, 0.0, 1.0);
    r.inner_radius = r.outer_radius = c.theta_hi;
    return;
  }
  if (c.theta_hi >= kPi) {  // south cap
    r.center = sphere_point(0.0, 0.0, -1.0);
    r.inner_radius = r.outer_radius = kPi - c.theta_lo;
    return;
  }
  const double theta_m = std::acos(0.5 * (cos_lo + cos_hi));
  const double phi_m = 0.5 * (c.phi_lo + c.phi_hi);
  const double half = 0.5 * (c.phi_hi - c.phi_lo);
  r.center = polar_point(theta_m, phi_m);

  double inner = std::min(theta_m - c.theta_lo, c.theta_hi - theta_m);
  if (sectors > 1) {
    inner = std::min(inner, std::asin(std::sin(theta_m) * std::sin(std::min(half, kPi / 2.0))));
  }
  r.inner_radius = inner;

  // farthest point: a corner, or where the distance along a meridian edge is
  // stationary; latitude arcs are monotone in |phi - phi_m|
  double outer = 0.0;
  for (double t : {c.theta_lo, c.theta_hi}) {
    outer = std::max(outer, sphere_distance(theta_m, phi_m, t, phi_m + half));
  }
  // cos(dist) = A cos(theta) + B sin(theta) along the edge; minimum at
  // theta0 + pi where (A, B) = R (cos theta0, sin theta0)
  const double A = std::cos(theta_m);
  const double B = std::sin(theta_m) * std::cos(half);
  double t_star = std::atan2(B, A) + kPi;
  if (t_star > kPi) t_star -= kTwoPi;
  if (t_star > c.theta_lo && t_star < c.theta_hi) {
    outer = std::max(outer, sphere_distance(theta_m, phi_m, t_star, phi_m + half));
  }
  r.outer_radius = outer;
}

}  // namespace

Partition Partition::equal_measure(const Manifold& m, std::size_t Y) {
  Partition p(m);
  if (!m.is_sphere()) {
    if (Y < 1) throw invalid_argument("torus partition needs Y >= 1");
    const int d = m.dimension();
    TorusCell unit;
    for (int i = 0; i < d; ++i) unit.hi[i] = 1.0;
    const std::size_t n = integer_root(Y, d);
    if (n > 0) {
      p.grid_side_ = n;
      std::array<std::size_t, 4> idx{};
      for (std::size_t r = 0; r < Y; ++r) {
        std::size_t rest = r;
        for (int i = d - 1; i >= 0; --i) {
          idx[i] = rest % n;
          rest /= n;
        }
        Region reg;
        for (int i = 0; i < d; ++i) {
          reg.torus.lo[i] = static_cast<double>(idx[i]) / static_cast<double>(n);
          reg.torus.hi[i] = static_cast<double>(idx[i] + 1) / static_cast<double>(n);
        }
        finish_torus_region(reg, d);
        p.regions_.push_back(reg);
      }
    } else {
      split_box(unit, Y, d, p.regions_);
    }
    return p;
  }

  if (Y < 2) throw invalid_argument("sphere partition needs Y >= 2");
  const double y = static_cast<double>(Y);
  std::vector<std::size_t> counts{1};
  if (Y > 2) {
    const double cap = std::acos(1.0 - 2.0 / y);
    const double ideal = std::sqrt(4.0 * kPi / y);
    const auto collars =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((kPi - 2.0 * cap) / ideal)));
    const double step = (kPi - 2.0 * cap) / static_cast<double>(collars);
    double carry = 0.0;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < collars; ++i) {
      const double t0 = cap + step * static_cast<double>(i);
      const double t1 = t0 + step;
      const double want = 0.5 * y * (std::cos(t0) - std::cos(t1)) + carry;
      auto got = static_cast<std::size_t>(std::max(1LL, std::llround(want)));
      if (i + 1 == collars) got = Y - 2 - assigned;
      carry = want - static_cast<double>(got);
      assigned += got;
      counts.push_back(got);
    }
  }
  counts.push_back(1);
  p.band_counts_ = counts;

  p.band_edges_.push_back(0.0);
  std::size_t cumulative = 0;
  for (std::size_t b = 0; b + 1 < counts.size(); ++b) {
    cumulative += counts[b];
    p.band_edges_.push_back(std::acos(1.0 - 2.0 * static_cast<double>(cumulative) / y));
  }
  p.band_edges_.push_back(kPi);

  for (std::size_t b = 0; b < counts.size(); ++b) {
    p.band_offsets_.push_back(p.regions_.size());
    const std::size_t n = counts[b];
    for (std::size_t k = 0; k < n; ++k) {
      Region reg;
      reg.sphere.theta_lo = p.band_edges_[b];
      reg.sphere.theta_hi = p.band_edges_[b + 1];
      reg.sphere.phi_lo = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      reg.sphere.phi_hi = k + 1 == n ? kTwoPi : kTwoPi * static_cast<double>(k + 1) / static_cast<double>(n);
      reg.sphere.collar = static_cast<int>(b);
      finish_sphere_region(reg, n);
      p.regions_.push_back(reg);
    }
  }
  return p;
}

bool Partition::contains(std::size_t r, const Point& x) const {
  const Region& reg = regions_.at(r);
  if (manifold_.is_sphere()) {
    return sphere_cell_contains(reg.sphere, angles_of(x),
                                reg.sphere.collar + 1 == static_cast<int>(band_counts_.size()));
  }
  return torus_cell_contains(reg.torus, x, manifold_.dimension());
}

std::size_t Partition::locate(const Point& x) const {
  if (x.size != manifold_.chart_size()) {
    throw invalid_argument("point does not belong to " + manifold_.name());
  }
  if (manifold_.is_sphere()) {
    const Angles a = angles_of(x);
    auto it = std::upper_bound(band_edges_.begin(), band_edges_.end(), a.theta);
    auto band = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - band_edges_.begin() - 1));
    band = std::min(band, band_counts_.size() - 1);
    const std::size_t n = band_counts_[band];
    auto k = static_cast<std::size_t>(std::min<double>(
        static_cast<double>(n - 1), std::floor(a.phi * static_cast<double>(n) / kTwoPi)));
    const std::size_t base = band_offsets_[band];
    // settle rounding at sector edges against the stored bounds
    if (k > 0 && a.phi < regions_[base + k].sphere.phi_lo) --k;
    if (k + 1 < n && a.phi >= regions_[base + k].sphere.phi_hi) ++k;
    if (contains(base + k, x)) return base + k;
  } else if (grid_side_ > 0) {
    std::size_t idx = 0;
    for (int i = 0; i < manifold_.dimension(); ++i) {
      auto c = static_cast<std::size_t>(x[i] * static_cast<double>(grid_side_));
      c = std::min(c, grid_side_ - 1);
      idx = idx * grid_side_ + c;
    }
    if (contains(idx, x)) return idx;
    // floor landed one cell off at an edge: fall through to the scan
  }
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    if (contains(r, x)) return r;
  }
  throw Error("point_outside_regions", "no region of the partition contains the point");
}

std::vector<RegionBucket> bucket_points(const Partition& partition, const WeightedPointSet& pts) {
  if (!(pts.manifold == partition.manifold())) {
    throw invalid_argument("points live on " + pts.manifold.name() + " but the partition is on " +
                           partition.manifold().name());
  }
  std::vector<RegionBucket> all(partition.size());
  std::vector<CompensatedSum> sums(partition.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const std::size_t r = partition.locate(pts.points[j]);
    all[r].members.push_back(j);
    sums[r].add(pts.weights[j]);
  }
  std::vector<RegionBucket> out;
  for (std::size_t r = 0; r < all.size(); ++r) {
    if (all[r].members.empty()) continue;
    all[r].region = r;
    all[r].K = all[r].members.size();
    all[r].S = sums[r].value();
    out.push_back(std::move(all[r]));
  }
  std::stable_sort(out.begin(), out.end(), [](const RegionBucket& a, const RegionBucket& b) {
    return a.S > b.S;
  });
  return out;
}

PartitionCheck verify_partition(const Partition& partition, std::size_t samples,
                                std::uint64_t seed) {
  if (samples < 10000) throw invalid_argument("verify_partition needs at least 1e4 samples");
  const std::size_t Y = partition.size();
  const Manifold& m = partition.manifold();
  PartitionCheck out;
  out.Y = Y;
  out.samples = samples;

  std::vector<std::size_t> hits(Y, 0);
  std::size_t exactly_one = 0;
  CounterRng rng(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x = random_point(m, rng);
    std::size_t claims = 0, owner = 0;
    for (std::size_t r = 0; r < Y; ++r) {
      if (partition.contains(r, x)) {
        ++claims;
        owner = r;
      }
    }
    if (claims == 1) {
      ++exactly_one;
      ++hits[owner];
    }
  }
  out.cover_fraction = static_cast<double>(exactly_one) / static_cast<double>(samples);

  const double p = 1.0 / static_cast<double>(Y);
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  CompensatedSum total;
  const double dim = m.is_sphere() ? 2.0 : static_cast<double>(m.dimension());
  const double scale = std::pow(static_cast<double>(Y), 1.0 / dim);
  out.c1_hat = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < Y; ++r) {
    const double err = static_cast<double>(hits[r]) / static_cast<double>(samples) - p;
    out.measure_errors.push_back(err);
    if (sigma > 0.0) out.max_sigma = std::max(out.max_sigma, std::abs(err) / sigma);
    out.max_analytic_error = std::max(out.max_analytic_error, std::abs(partition[r].measure - p));
    total.add(partition[r].measure);
    out.c1_hat = std::min(out.c1_hat, partition[r].inner_radius * scale);
    out.c2_hat = std::max(out.c2_hat, partition[r].outer_radius * scale);
  }
  out.analytic_total = total.value();
  return out;
}

}  // namespace cmlab
