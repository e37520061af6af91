#include "cmlab/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cmlab/error.hpp"
#include "cmlab/special.hpp"

namespace cmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kGaussianCutoff = 4.5;  // exp(-pi r^2) < 2e-28 beyond
constexpr double kCalibrationPoint = 0.3;

double int_pow(double s, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= s;
  return p;
}

double transform_panel(double rho, double radius) {
  const double cap = radius / 64.0;
  return rho > 0.0 ? std::min(cap, 1.0 / (4.0 * rho)) : cap;
}

double cosine_panel(double t, double radius) {
  const double cap = radius / 64.0;
  return t > 0.0 ? std::min(cap, kPi / (2.0 * t)) : cap;
}

void check_transplant_dims(int d, int d_prime) {
  if (d_prime < 1 || d_prime >= d || d > 4) {
    throw invalid_argument("transplantation needs 1 <= d' < d <= 4, got d=" +
                           std::to_string(d) + " d'=" + std::to_string(d_prime));
  }
}

// int_0^sqrt(R^2-s^2) u^{k-1} g(sqrt(s^2+u^2)) du
double transplant_integral(const RadialProfile& g, int k, double s,
                           const IntegrationOptions& opts) {
  const double radius = g.effective_radius();
  if (s >= radius) return 0.0;
  const double upper = std::sqrt(radius * radius - s * s);
  return integrate_panels(
      [&](double u) { return int_pow(u, k - 1) * g(std::sqrt(s * s + u * u)); }, 0.0, upper,
      upper / 64.0, opts);
}

}  // namespace

CubicSplineGrid::CubicSplineGrid(double step, std::vector<double> values, double end_slope)
    : step_(step), values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n < 2 || !(step > 0.0)) throw invalid_argument("spline grid needs >= 2 samples and step > 0");
  const double h = step_;
  const auto& y = values_;
  // clamped spline: slope 0 at the origin, end_slope at the far end
  std::vector<double> diag(n), rhs(n), upper(n, 1.0), lower(n, 1.0);
  diag[0] = 2.0;
  rhs[0] = 6.0 / h * ((y[1] - y[0]) / h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diag[i] = 4.0;
    rhs[i] = 6.0 / (h * h) * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
  }
  diag[n - 1] = 2.0;
  rhs[n - 1] = 6.0 / h * (end_slope - (y[n - 1] - y[n - 2]) / h);
  // Thomas algorithm
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  second_.assign(n, 0.0);
  second_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    second_[i] = (rhs[i] - upper[i] * second_[i + 1]) / diag[i];
  }
}

double CubicSplineGrid::operator()(double r) const {
  if (r < 0.0) r = -r;
  const double pos = r / step_;
  const std::size_t last = values_.size() - 1;
  if (pos >= static_cast<double>(last)) return pos == static_cast<double>(last) ? values_[last] : 0.0;
  const auto i = static_cast<std::size_t>(pos);
  const double t = pos - static_cast<double>(i);
  const double u = 1.0 - t;
  const double h2 = step_ * step_ / 6.0;
  return u * values_[i] + t * values_[i + 1] +
         h2 * ((u * u * u - u) * second_[i] + (t * t * t - t) * second_[i + 1]);
}

RadialProfile::RadialProfile(int dimension, double support_radius, double effective_radius,
                             Evaluator evaluator, std::string name)
    : dimension_(dimension),
      support_radius_(support_radius),
      effective_radius_(effective_radius),
      evaluator_(std::move(evaluator)),
      name_(std::move(name)) {
  if (dimension < 1) throw invalid_argument("radial profile dimension must be >= 1");
  if (!(effective_radius > 0.0) || !std::isfinite(effective_radius)) {
    throw invalid_argument("radial profile needs a finite positive effective radius");
  }
}

RadialProfile RadialProfile::gaussian(int dimension) {
  return RadialProfile(
      dimension, std::numeric_limits<double>::infinity(), kGaussianCutoff,
      [](double r) { return std::exp(-kPi * r * r); }, "gaussian");
}

RadialProfile RadialProfile::bump(int dimension, double radius, double scale) {
  return RadialProfile(
      dimension, radius, radius,
      [radius, scale](double r) {
        const double x = r / radius;
        const double gap = 1.0 - x * x;
        return gap > 0.0 ? scale * std::exp(-1.0 / gap) : 0.0;
      },
      "bump");
}

RadialProfile RadialProfile::indicator(int dimension, double radius, double value) {
  return RadialProfile(
      dimension, radius, radius, [value](double) { return value; }, "indicator");
}

RadialProfile RadialProfile::sampled(int dimension, double step, std::vector<double> values,
                                     std::string name, double end_slope) {
  if (values.size() < 513) {
    throw invalid_argument("sampled profiles need at least 512 intervals (h <= R/512)");
  }
  auto grid = std::make_shared<const CubicSplineGrid>(step, std::move(values), end_slope);
  const double extent = grid->extent();
  RadialProfile p(
      dimension, extent, extent, [grid](double r) { return (*grid)(r); }, std::move(name));
  p.grid_ = std::move(grid);
  return p;
}

double RadialProfile::operator()(double r) const {
  if (r < 0.0) r = -r;
  if (r > support_radius_) return 0.0;
  return evaluator_(r);
}

RadialProfile RadialProfile::in_dimension(int d) const {
  RadialProfile copy = *this;
  if (d < 1) throw invalid_argument("radial profile dimension must be >= 1");
  copy.dimension_ = d;
  return copy;
}

double hankel_kernel(int d, double z) {
  switch (d) {
    case 1:
      return std::sqrt(2.0 / kPi) * std::cos(z);
    case 3: {
      if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return std::sqrt(2.0 / kPi) * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
      }
      return std::sqrt(2.0 / kPi) * std::sin(z) / z;
    }
    default:
      return bessel_j_scaled((d - 2) / 2.0, z);
  }
}

double fourier_radial(const RadialProfile& f, double rho, const IntegrationOptions& opts) {
  if (!(rho >= 0.0)) throw invalid_argument("fourier_radial needs rho >= 0");
  const int d = f.dimension();
  const double radius = f.effective_radius();
  if (rho == 0.0) {
    return unit_sphere_area(d) *
           integrate_panels([&](double s) { return f(s) * int_pow(s, d - 1); }, 0.0, radius,
                            transform_panel(0.0, radius), opts);
  }
  const double scale = std::pow(kTwoPi, d / 2.0);
  const double freq = kTwoPi * rho;
  return scale * integrate_panels(
                     [&](double s) {
                       return f(s) * int_pow(s, d - 1) * hankel_kernel(d, freq * s);
                     },
                     0.0, radius, transform_panel(rho, radius), opts);
}

RadialProfile fourier_profile(const RadialProfile& f, double effective_radius,
                              const IntegrationOptions& opts) {
  return RadialProfile(
      f.dimension(), std::numeric_limits<double>::infinity(), effective_radius,
      [f, opts](double rho) { return fourier_radial(f, rho, opts); }, "F(" + f.name() + ")");
}

double cosine_transform(const RadialProfile& f, double t, const IntegrationOptions& opts) {
  const double radius = f.effective_radius();
  return integrate_panels([&](double s) { return f(s) * std::cos(s * t); }, 0.0, radius,
                          cosine_panel(std::abs(t), radius), opts);
}

double inverse_cosine_transform(const RadialProfile& f, double s,
                                const IntegrationOptions& opts) {
  return 2.0 / kPi * cosine_transform(f, s, opts);
}

RadialProfile cosine_profile(const RadialProfile& f, double effective_radius,
                             const IntegrationOptions& opts) {
  return RadialProfile(
      1, std::numeric_limits<double>::infinity(), effective_radius,
      [f, opts](double t) { return cosine_transform(f, t, opts); }, "C(" + f.name() + ")");
}

double transplant_constant(int d, int d_prime) {
  check_transplant_dims(d, d_prime);
  static std::array<std::once_flag, 25> flags;
  static std::array<double, 25> values{};
  const auto slot = static_cast<std::size_t>(d * 5 + d_prime);
  std::call_once(flags[slot], [&] {
    const RadialProfile g = RadialProfile::gaussian(d);
    const IntegrationOptions opts;
    const double lhs = double_transform(g, d_prime, kCalibrationPoint, kGaussianCutoff, opts);
    const double rhs = transplant_integral(g, d - d_prime, kCalibrationPoint, opts);
    values[slot] = lhs / rhs;
  });
  return values[slot];
}

double transplant(const RadialProfile& g, int d_prime, double s, const IntegrationOptions& opts) {
  const int d = g.dimension();
  check_transplant_dims(d, d_prime);
  if (!(s >= 0.0)) throw invalid_argument("transplant needs s >= 0");
  return transplant_constant(d, d_prime) * transplant_integral(g, d - d_prime, s, opts);
}

double double_transform(const RadialProfile& g, int d_prime, double s,
                        double inner_effective_radius, const IntegrationOptions& opts) {
  check_transplant_dims(g.dimension(), d_prime);
  const RadialProfile inner = fourier_profile(g, inner_effective_radius, opts).in_dimension(d_prime);
  return fourier_radial(inner, s, opts);
}

}  // namespace cmlab
