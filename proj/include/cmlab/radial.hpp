#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmlab/integrate.hpp"

namespace cmlab {

/// Uniform-grid samples r_i = i * step with a clamped cubic spline through
/// them (zero slope at r = 0, matching the even extension of a radial
/// profile; the slope at the far end is given).
class CubicSplineGrid {
 public:
  CubicSplineGrid(double step, std::vector<double> values, double end_slope = 0.0);

  double operator()(double r) const;
  double step() const { return step_; }
  double extent() const { return step_ * static_cast<double>(values_.size() - 1); }
  const std::vector<double>& values() const { return values_; }

 private:
  double step_;
  std::vector<double> values_;
  std::vector<double> second_;  // spline second derivatives at the nodes
};

/// A radial function f(|x|) on R^d, identified with its profile on [0, inf).
///
/// `support_radius` is finite for compactly supported profiles (the
/// evaluator is never consulted beyond it). `effective_radius` is where
/// quadrature truncates: equal to the support radius when finite, otherwise
/// a radius past which the profile is negligible.
class RadialProfile {
 public:
  using Evaluator = std::function<double(double)>;

  RadialProfile(int dimension, double support_radius, double effective_radius,
                Evaluator evaluator, std::string name);

  /// exp(-pi r^2), its own d-dimensional Fourier transform.
  static RadialProfile gaussian(int dimension);
  /// scale * exp(-1 / (1 - (r/radius)^2)) on r < radius.
  static RadialProfile bump(int dimension, double radius, double scale = 1.0);
  /// value on [0, radius], zero beyond.
  static RadialProfile indicator(int dimension, double radius, double value = 1.0);
  /// Samples r_i = i * step, i = 0..n-1, supported on [0, (n-1) step].
  static RadialProfile sampled(int dimension, double step, std::vector<double> values,
                               std::string name, double end_slope = 0.0);

  double operator()(double r) const;

  int dimension() const { return dimension_; }
  double support_radius() const { return support_radius_; }
  double effective_radius() const { return effective_radius_; }
  bool compact() const { return std::isfinite(support_radius_); }
  const std::string& name() const { return name_; }
  /// Sampling grid for sampled profiles.
  const CubicSplineGrid* grid() const { return grid_.get(); }

  /// Same profile regarded as a function on R^d' (transforms depend on d).
  RadialProfile in_dimension(int d) const;

 private:
  int dimension_;
  double support_radius_;
  double effective_radius_;
  Evaluator evaluator_;
  std::string name_;
  std::shared_ptr<const CubicSplineGrid> grid_;
};

/// Radial Fourier kernel J_nu(z) / z^nu with nu = (d-2)/2 (closed forms for
/// odd d).
double hankel_kernel(int d, double z);

/// F_d f(rho) = 2 pi rho^{-(d-2)/2} int_0^inf f(s) J_{(d-2)/2}(2 pi rho s) s^{d/2} ds,
/// evaluated as (2 pi)^{d/2} int f(s) s^{d-1} hankel_kernel(d, 2 pi rho s) ds by
/// adaptive panel quadrature, panel length <= min(1/(4 rho), R/64). At rho = 0
/// this is |S^{d-1}| int f(s) s^{d-1} ds.
double fourier_radial(const RadialProfile& f, double rho, const IntegrationOptions& opts = {});

/// Profile of F_d f (noncompact), truncated for quadrature at `effective_radius`.
RadialProfile fourier_profile(const RadialProfile& f, double effective_radius,
                              const IntegrationOptions& opts = {});

/// C f(t) = int_0^inf f(s) cos(s t) ds.
double cosine_transform(const RadialProfile& f, double t, const IntegrationOptions& opts = {});
/// C^{-1} f(s) = (2/pi) int_0^inf f(t) cos(s t) dt.
double inverse_cosine_transform(const RadialProfile& f, double s,
                                const IntegrationOptions& opts = {});

RadialProfile cosine_profile(const RadialProfile& f, double effective_radius,
                             const IntegrationOptions& opts = {});

/// Normalizing constant of the transplantation identity
///   F_d'(F_d g)(s) = c_{d,d'} int_s^inf (r^2 - s^2)^{(d-d')/2 - 1} r g(r) dr.
/// Calibrated once per (d, d') by evaluating both sides on a Gaussian at
/// s = 0.3, then cached for the life of the process.
double transplant_constant(int d, int d_prime);

/// Right-hand side of the transplantation identity for g regarded on R^d.
/// Computed through r = sqrt(s^2 + u^2), which removes the endpoint
/// singularity of the d - d' = 1 case.
double transplant(const RadialProfile& g, int d_prime, double s,
                  const IntegrationOptions& opts = {});

/// Left-hand side of the same identity, computed directly as two nested
/// radial transforms. `inner_effective_radius` truncates F_d g.
double double_transform(const RadialProfile& g, int d_prime, double s,
                        double inner_effective_radius, const IntegrationOptions& opts = {});

}  // namespace cmlab
