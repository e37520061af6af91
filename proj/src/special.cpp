#include "cmlab/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cmlab/error.hpp"

namespace cmlab {

namespace {

constexpr double kSeriesLimit = 14.0;
constexpr double kPi = std::numbers::pi;

void check_order(double nu) {
  if (!(nu >= kMinBesselOrder && nu <= kMaxBesselOrder)) {
    std::ostringstream os;
    os << "Bessel order " << nu << " outside [" << kMinBesselOrder << ", "
       << kMaxBesselOrder << "]";
    throw Error("order_out_of_range", os.str());
  }
}

bool is_negative_integer(double nu) { return nu < 0 && nu == std::floor(nu); }

// sum_k (-1)^k (x/2)^{2k} / (k! Gamma(k+nu+1)); multiply by (x/2)^nu for J.
long double reduced_series(double nu, double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<long double>(k) * (static_cast<long double>(k) + nu));
    sum += term;
    if (k > x && std::fabs(term) <= 1e-22L * std::fabs(sum)) break;
  }
  return sum;
}

// Hankel expansion; terms summed up to the smallest one (they terminate
// exactly for half-integer orders).
double hankel_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    const double mag = std::abs(term);
    if (mag > last) break;
    // k odd contributes to Q with sign (-1)^{(k-1)/2}; k even to P with (-1)^{k/2}
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
    if (mag < 1e-17 || term == 0.0) break;
    last = mag;
  }
  const double omega = x - (nu / 2.0 + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

double large_argument(double nu, double x) {
  if (nu < 2.0) return hankel_asymptotic(nu, x);
  const double base = nu - std::floor(nu);
  double lower = hankel_asymptotic(base, x);
  double upper = hankel_asymptotic(base + 1.0, x);
  for (double order = base + 1.0; order < nu - 0.5; order += 1.0) {
    const double next = 2.0 * order / x * upper - lower;
    lower = upper;
    upper = next;
  }
  return upper;
}

}  // namespace

double bessel_j(double nu, double x) {
  check_order(nu);
  if (!(x >= 0.0)) throw invalid_argument("bessel_j requires x >= 0");
  if (is_negative_integer(nu)) return -bessel_j(-nu, x);  // J_{-1} = -J_1
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw invalid_argument("J_nu(0) is unbounded for negative non-integer nu");
  }
  if (x <= kSeriesLimit) {
    const long double half = static_cast<long double>(x) / 2.0L;
    return static_cast<double>(std::pow(half, static_cast<long double>(nu)) *
                               reduced_series(nu, x));
  }
  return large_argument(nu, x);
}

double bessel_j_scaled(double nu, double x) {
  check_order(nu);
  if (!(x >= 0.0)) throw invalid_argument("bessel_j_scaled requires x >= 0");
  if (is_negative_integer(nu)) return -x * bessel_j(1.0, x);
  if (x <= kSeriesLimit) {
    return static_cast<double>(std::pow(2.0L, static_cast<long double>(-nu)) *
                               reduced_series(nu, x));
  }
  return large_argument(nu, x) / std::pow(x, nu);
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
}

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw invalid_argument("Gauss-Legendre rule needs n >= 1");
  if (n == 1) return GaussRule{{0.0}, {2.0}};
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    long double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L;
      long double p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * z * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0L);
      const long double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
    rule.nodes[i] = static_cast<double>(-z);
    rule.nodes[n - 1 - i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(w);
    rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

LegendreTable::LegendreTable(int lmax, double cos_theta, double sin_theta)
    : lmax_(lmax), values_(index(lmax, lmax) + 1, 0.0) {
  const double x = cos_theta;
  const double s = sin_theta;
  double diag = 1.0;  // pbar(m, m) / sqrt(2m+1)
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) diag *= s * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
    const double pmm = std::sqrt(2.0 * m + 1.0) * diag;
    values_[index(m, m)] = pmm;
    if (m == lmax) break;
    double prev = pmm;
    double cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
    values_[index(m + 1, m)] = cur;
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = l;
      const double mm = m;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) /
                                 (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      const double next = a * (x * cur - b * prev);
      values_[index(l, m)] = next;
      prev = cur;
      cur = next;
    }
  }
}

double legendre_p(int l, double x) {
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace cmlab
