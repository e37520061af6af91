#include "cmlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cmlab/error.hpp"
#include "cmlab/parallel.hpp"
#include "cmlab/rng.hpp"
#include "cmlab/summation.hpp"

namespace cmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBlock = 64;
constexpr double kOverflowScale = 1e300;
constexpr double kOracleFrequencyCap = 60.0;

// c_m over a contiguous range of points, compensated, in point order.
std::vector<double> block_coefficients(const Spectrum& spectrum, std::size_t count,
                                       std::span<const Point> points,
                                       std::span<const double> weights) {
  std::vector<CompensatedSum> acc(count);
  std::vector<double> phi(count);
  for (std::size_t j = 0; j < points.size(); ++j) {
    spectrum.evaluate(points[j], phi);
    for (std::size_t m = 0; m < count; ++m) acc[m].add(weights[j] * phi[m]);
  }
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) out[m] = acc[m].value();
  return out;
}

double sum_of_squares(std::span<const double> c, std::size_t from = 0) {
  CompensatedSum s;
  for (std::size_t m = from; m < c.size(); ++m) s.add(c[m] * c[m]);
  return s.value();
}

void check_points(const Manifold& m, std::span<const Point> points) {
  for (const Point& p : points) {
    if (p.size != m.chart_size()) {
      throw invalid_argument("point with " + std::to_string(p.size) +
                             " coordinates does not belong to " + m.name());
    }
  }
}

std::uint64_t sweep_stream(std::size_t X, PointFamily f, std::size_t instance) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(X));
  h = mix64(h ^ static_cast<std::uint64_t>(f));
  return mix64(h ^ static_cast<std::uint64_t>(instance));
}

}  // namespace

WeightedPointSet WeightedPointSet::make(Manifold m, std::vector<Point> points,
                                        std::vector<double> weights) {
  if (points.empty()) throw invalid_argument("a weighted point set needs N >= 1");
  if (points.size() != weights.size()) {
    throw invalid_argument("got " + std::to_string(points.size()) + " points but " +
                           std::to_string(weights.size()) + " weights");
  }
  check_points(m, points);
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error("nonpositive_weight", "weights must be finite and strictly positive");
    }
  }
  WeightedPointSet s;
  s.manifold = m;
  s.points = std::move(points);
  s.weights = std::move(weights);
  return s;
}

WeightedPointSet WeightedPointSet::uniform(Manifold m, std::vector<Point> points) {
  const std::size_t n = points.size();
  return make(m, std::move(points),
              std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n)));
}

std::string truncation_name(Truncation t) { return t == Truncation::Index ? "index" : "frequency"; }

std::vector<double> spectral_coefficients(const Spectrum& spectrum, std::span<const Point> points,
                                          std::span<const double> weights) {
  if (points.size() != weights.size()) throw invalid_argument("points and weights differ in length");
  check_points(spectrum.manifold(), points);
  const std::size_t count = spectrum.size();
  const std::size_t blocks = (points.size() + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t len = std::min(kBlock, points.size() - lo);
    partial[b] = block_coefficients(spectrum, count, points.subspan(lo, len),
                                    weights.subspan(lo, len));
  });
  std::vector<double> c(count, 0.0);
  for (std::size_t m = 0; m < count; ++m) {
    CompensatedSum s;
    for (const auto& p : partial) s.add(p[m]);
    c[m] = s.value();
  }
  return c;
}

BoundReport spectral_sum(const WeightedPointSet& pts, std::size_t X) {
  const auto spectrum = Spectrum::first(pts.manifold, X + 1);
  const auto c = spectral_coefficients(*spectrum, pts.points, pts.weights);

  BoundReport r;
  r.manifold = pts.manifold.name();
  r.X = X;
  r.N = pts.size();
  r.S = sum_of_squares(c);
  r.sum_w = compensated_sum(pts.weights);
  CompensatedSum w2;
  for (double a : pts.weights) w2.add(a * a);
  r.sum_w2 = w2.value();
  r.lower_trivial = r.sum_w * r.sum_w;
  if (X >= 1) r.ratio = r.S / (static_cast<double>(X) * r.sum_w2);
  r.lambda_X = (*spectrum)[X].lambda;
  r.truncation = Truncation::Index;
  r.overflow_warning = !(std::abs(r.S) <= kOverflowScale);
  return r;
}

double frequency_at_index(const Manifold& m, std::size_t X) {
  return enumerate_spectrum(m, X + 1).back().lambda;
}

double smoothed_sum(const WeightedPointSet& pts, const RadialProfile& kernel, double lambda_X) {
  if (!(lambda_X > 0.0)) throw invalid_argument("lambda_X must be positive");
  auto pairs = enumerate_below(pts.manifold, lambda_X);
  const Spectrum spectrum(pts.manifold, std::move(pairs));
  const auto c = spectral_coefficients(spectrum, pts.points, pts.weights);
  CompensatedSum s;
  for (std::size_t m = 0; m < c.size(); ++m) {
    s.add(kernel(spectrum[m].lambda / lambda_X) * c[m] * c[m]);
  }
  return s.value();
}

double smoothed_sum(const WeightedPointSet& pts, const KernelSuite& suite) {
  return smoothed_sum(pts, suite.H(), suite.lambda_X());
}

double torus_kernel_oracle(int d, const RadialProfile& kernel, double lambda_X, const Point& x,
                           const Point& y) {
  if (d < 1 || d > 3) throw unsupported_dimension("torus kernel oracle supports d <= 3");
  if (x.size != d || y.size != d) throw invalid_argument("points do not belong to the torus");
  if (!(lambda_X > 0.0) || lambda_X / kTwoPi > kOracleFrequencyCap) {
    throw Error("lattice_bound_exceeded",
                "torus kernel oracle needs 0 < lambda_X / 2pi <= " +
                    std::to_string(kOracleFrequencyCap));
  }
  const int radius = static_cast<int>(std::floor(lambda_X / kTwoPi));
  std::array<double, 3> delta{};
  for (int i = 0; i < d; ++i) delta[i] = x[i] - y[i];

  std::array<int, 3> k{};
  for (int i = 0; i < d; ++i) k[i] = -radius;
  CompensatedSum total;
  for (;;) {
    long norm2 = 0;
    double t = 0.0;
    for (int i = 0; i < d; ++i) {
      norm2 += static_cast<long>(k[i]) * k[i];
      t += k[i] * delta[i];
    }
    const double freq = kTwoPi * std::sqrt(static_cast<double>(norm2));
    if (freq < lambda_X) total.add(kernel(freq / lambda_X) * std::cos(kTwoPi * t));
    int axis = d - 1;
    while (axis >= 0 && k[axis] == radius) {
      k[axis] = -radius;
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
  return total.value();
}

double torus_kernel_oracle(int d, const KernelSuite& suite, const Point& x, const Point& y) {
  return torus_kernel_oracle(d, suite.H(), suite.lambda_X(), x, y);
}

ExpectationResult expectation_mc(const Manifold& m, std::size_t X, std::span<const double> weights,
                                 std::size_t trials, std::uint64_t seed) {
  if (trials < 100) throw invalid_argument("expectation_mc needs at least 100 trials");
  if (weights.empty()) throw invalid_argument("expectation_mc needs N >= 1 weights");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error("nonpositive_weight", "weights must be finite and strictly positive");
    }
  }
  const auto spectrum = Spectrum::first(m, X + 1);
  const std::size_t n = weights.size();
  std::vector<double> phi_values(trials);
  parallel_for(trials, [&](std::size_t t) {
    CounterRng rng(seed, t);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = random_point(m, rng);
    const auto c = block_coefficients(*spectrum, X + 1, pts, weights);
    phi_values[t] = sum_of_squares(c, 1);
  });

  ExpectationResult r;
  r.trials = trials;
  r.seed = seed;
  const double count = static_cast<double>(trials);
  r.mean = pairwise_sum(phi_values) / count;
  std::vector<double> dev(trials);
  for (std::size_t t = 0; t < trials; ++t) dev[t] = (phi_values[t] - r.mean) * (phi_values[t] - r.mean);
  r.std_err = std::sqrt(pairwise_sum(dev) / (count - 1.0) / count);
  r.min = *std::min_element(phi_values.begin(), phi_values.end());
  CompensatedSum w2;
  for (double a : weights) w2.add(a * a);
  r.target = static_cast<double>(X) * w2.value();
  return r;
}

SweepResult empirical_constant_sweep(const SweepConfig& config) {
  if (config.families.empty()) throw invalid_argument("sweep needs at least one point family");
  if (config.X_list.empty()) throw invalid_argument("sweep needs at least one X");
  if (config.instances == 0) throw invalid_argument("sweep needs at least one instance");
  std::vector<std::size_t> xs = config.X_list;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.front() == 0) throw invalid_argument("sweep X values must be >= 1");
  if (config.N && *config.N == 0) throw invalid_argument("sweep N must be >= 1");

  const auto spectrum = Spectrum::first(config.manifold, xs.back() + 1);
  const std::size_t per_x = config.families.size() * config.instances;
  SweepResult result;
  result.rows.resize(xs.size() * per_x);

  parallel_for(result.rows.size(), [&](std::size_t task) {
    const std::size_t X = xs[task / per_x];
    const std::size_t rest = task % per_x;
    const PointFamily family = config.families[rest / config.instances];
    const std::size_t instance = rest % config.instances;

    CounterRng rng(config.seed, sweep_stream(X, family, instance));
    const std::size_t lo = std::max<std::size_t>(1, X / 4);
    const std::size_t n = config.N ? *config.N
                                   : static_cast<std::size_t>(rng.uniform_int(
                                         static_cast<std::int64_t>(lo),
                                         static_cast<std::int64_t>(2 * X)));
    const auto pts = generate_points(config.manifold, family, n, rng);
    const auto w = generate_weights(config.weight_mode, n, rng);
    const auto c = block_coefficients(*spectrum, X + 1, pts, w);

    SweepRow row;
    row.family = family;
    row.X = X;
    row.instance = instance;
    row.N = n;
    row.S = sum_of_squares(c);
    row.sum_w = compensated_sum(w);
    CompensatedSum w2;
    for (double a : w) w2.add(a * a);
    row.sum_w2 = w2.value();
    const double scaled = static_cast<double>(X) * row.sum_w2;
    row.ratio = row.S / scaled;
    row.upper_ratio = row.S / (scaled + row.sum_w * row.sum_w);
    result.rows[task] = row;
  });

  result.c_hat = std::numeric_limits<double>::infinity();
  std::vector<double> log_x, log_min;
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    double min_over_families = std::numeric_limits<double>::infinity();
    for (std::size_t fi = 0; fi < config.families.size(); ++fi) {
      SweepCell cell;
      cell.family = config.families[fi];
      cell.X = xs[xi];
      cell.min_ratio = std::numeric_limits<double>::infinity();
      cell.min_upper_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < config.instances; ++i) {
        const SweepRow& row = result.rows[xi * per_x + fi * config.instances + i];
        cell.min_ratio = std::min(cell.min_ratio, row.ratio);
        cell.min_upper_ratio = std::min(cell.min_upper_ratio, row.upper_ratio);
      }
      min_over_families = std::min(min_over_families, cell.min_ratio);
      result.cells.push_back(cell);
    }
    result.c_hat = std::min(result.c_hat, min_over_families);
    log_x.push_back(std::log(static_cast<double>(xs[xi])));
    log_min.push_back(std::log(min_over_families));
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += log_x[i];
      my += log_min[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (log_x[i] - mx) * (log_min[i] - my);
      sxx += (log_x[i] - mx) * (log_x[i] - mx);
    }
    result.log_slope = sxy / sxx;
  }
  return result;
}

}  // namespace cmlab
