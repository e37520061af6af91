#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cmlab {

using Integrand = std::function<double(double)>;

struct IntegrationOptions {
  /// Absolute tolerance per unit length of the integration interval.
  double tolerance_density = 1e-14;
  /// Relative tolerance against the panel's own magnitude.
  double relative_tolerance = 1e-13;
  int max_depth = 20;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b]; bisects until the Gauss and
/// Kronrod estimates agree. Throws non_convergence past max_depth.
double integrate_adaptive(const Integrand& f, double a, double b,
                          const IntegrationOptions& opts = {});

/// Splits [a, b] into equal panels no longer than max_panel and integrates
/// each adaptively. The panel cap keeps oscillatory integrands to a fraction
/// of a period per panel.
double integrate_panels(const Integrand& f, double a, double b, double max_panel,
                        const IntegrationOptions& opts = {});

/// Fixed composite Gauss-Legendre rule: `panels` equal panels on [a, b] with
/// `order` nodes each. Used for bulk transforms where one node set is reused
/// for many output arguments.
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static CompositeRule make(double a, double b, std::size_t panels, std::size_t order);

  template <typename F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

}  // namespace cmlab
