#include "cmlab/enu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "cmlab/error.hpp"
#include "cmlab/integrate.hpp"
#include "cmlab/special.hpp"

namespace cmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxHalfPeriods = 200;
constexpr int kMinHalfPeriods = 16;
constexpr int kAveragingDepth = 24;
constexpr double kSettleTolerance = 1e-12;

// Top of the averaging triangle built from the last `depth` partial sums.
double euler_estimate(const std::vector<double>& partial) {
  const std::size_t depth = std::min<std::size_t>(kAveragingDepth, partial.size());
  std::vector<double> row(partial.end() - static_cast<std::ptrdiff_t>(depth), partial.end());
  for (std::size_t level = 1; level < depth; ++level) {
    for (std::size_t i = 0; i + level < depth; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
  }
  return row[0];
}

}  // namespace

EnuCheck verify_enu_identity(int d, double nu, double z_abs, double s) {
  if (d < 1) throw invalid_argument("dimension must be positive");
  const double lo = (d - 1) / 2.0;
  const double hi = d / 2.0;
  if (!(nu > lo && nu < hi)) {
    std::ostringstream os;
    os << "nu = " << nu << " is outside the open strip (" << lo << ", " << hi << ")";
    throw invalid_argument(os.str());
  }
  if (!(z_abs > 0.0) || !(s > 0.0)) throw invalid_argument("z_abs and s must be positive");
  if (s * z_abs > 100.0) throw invalid_argument("s * z_abs must not exceed 100");

  const double a = nu + (1.0 - d) / 2.0;
  const double mu = d / 2.0 - 1.0 - nu;
  const double z2 = z_abs * z_abs;

  IntegrationOptions opts;
  opts.max_depth = 30;

  // zeros of cos(s t) above z: t_k = (k + 1/2) pi / s
  const double period = kPi / s;
  double k0 = std::ceil(z_abs / period - 0.5);
  double first_zero = (k0 + 0.5) * period;
  if (first_zero <= z_abs) first_zero += period;

  // first piece via v = (t^2 - z^2)^a, t dt (t^2 - z^2)^{a-1} = dv / (2a)
  const double v_top = std::pow(first_zero * first_zero - z2, a);
  const double inv_a = 1.0 / a;
  const double head = integrate_adaptive(
                          [&](double v) {
                            return std::cos(s * std::sqrt(z2 + std::pow(v, inv_a)));
                          },
                          0.0, v_top, opts) /
                      (2.0 * a);

  auto piece = [&](double t0, double t1) {
    return integrate_adaptive(
        [&](double t) { return t * std::pow(t * t - z2, a - 1.0) * std::cos(s * t); }, t0, t1,
        opts);
  };

  std::vector<double> partial{head};
  double previous = head;
  double estimate = head;
  bool settled = false;
  double t0 = first_zero;
  int used = 0;
  for (int k = 1; k <= kMaxHalfPeriods; ++k) {
    const double t1 = t0 + period;
    partial.push_back(partial.back() + piece(t0, t1));
    t0 = t1;
    used = k;
    if (k < kMinHalfPeriods) continue;
    estimate = euler_estimate(partial);
    double magnitude = 0.0;
    for (double p : partial) magnitude = std::max(magnitude, std::abs(p));
    if (std::abs(estimate - previous) <= kSettleTolerance * magnitude) {
      settled = true;
      break;
    }
    previous = estimate;
  }
  if (!settled) {
    throw Error("acceleration_divergence",
                "accelerated partial sums failed the Cauchy test after 200 half-periods");
  }

  const double lhs_pref =
      std::pow(2.0, 1.0 - 2.0 * nu) / (std::pow(kPi, (d + 1) / 2.0) * std::tgamma(a));
  const double rhs_pref =
      std::pow(kPi, -d / 2.0) * std::pow(2.0, -nu - d / 2.0) * std::pow(s, d - 2.0 * nu - 1.0);

  EnuCheck out;
  out.lhs = lhs_pref * estimate;
  out.rhs = rhs_pref * bessel_j_scaled(mu, s * z_abs);
  out.scale = std::abs(rhs_pref * std::pow(2.0, -mu) / std::tgamma(mu + 1.0));
  out.rel_err = std::abs(out.lhs - out.rhs) /
                std::max(std::abs(out.rhs), std::numeric_limits<double>::min());
  out.half_periods = used;
  return out;
}

}  // namespace cmlab
