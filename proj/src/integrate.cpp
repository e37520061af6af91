#include "cmlab/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cmlab/error.hpp"
#include "cmlab/special.hpp"

namespace cmlab {

namespace {

// Kronrod 15-point abscissae (positive half, descending) with the embedded
// Gauss 7-point weights on the odd entries.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double kronrod;
  double gauss;
};

Estimate gk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {kronrod * half, gauss * half};
}

double adaptive(const Integrand& f, double a, double b, double abs_tol,
                const IntegrationOptions& opts, int depth) {
  const Estimate e = gk15(f, a, b);
  const double err = std::abs(e.kronrod - e.gauss);
  if (err <= std::max(abs_tol, opts.relative_tolerance * std::abs(e.kronrod))) {
    return e.kronrod;
  }
  if (depth >= opts.max_depth) {
    std::ostringstream os;
    os << "adaptive quadrature did not converge on [" << a << ", " << b
       << "] after " << depth << " bisections (error estimate " << err << ")";
    throw non_convergence(os.str());
  }
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * abs_tol, opts, depth + 1) +
         adaptive(f, mid, b, 0.5 * abs_tol, opts, depth + 1);
}

}  // namespace

double integrate_adaptive(const Integrand& f, double a, double b,
                          const IntegrationOptions& opts) {
  if (a == b) return 0.0;
  const double abs_tol = opts.tolerance_density * std::abs(b - a);
  return adaptive(f, a, b, abs_tol, opts, 0);
}

double integrate_panels(const Integrand& f, double a, double b, double max_panel,
                        const IntegrationOptions& opts) {
  if (a == b) return 0.0;
  const double length = b - a;
  const auto panels =
      static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(length) / max_panel)));
  const double h = length / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : lo + h;
    total += integrate_adaptive(f, lo, hi, opts);
  }
  return total;
}

CompositeRule CompositeRule::make(double a, double b, std::size_t panels, std::size_t order) {
  if (panels == 0) throw invalid_argument("composite rule needs at least one panel");
  const GaussRule base = gauss_legendre(order);
  CompositeRule rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double center = a + h * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < order; ++i) {
      rule.nodes.push_back(center + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace cmlab
