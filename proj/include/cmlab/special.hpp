#pragma once

#include <cstddef>
#include <vector>

namespace cmlab {

inline constexpr double kMinBesselOrder = -1.0;
inline constexpr double kMaxBesselOrder = 6.0;

/// Bessel function of the first kind J_nu(x) for real nu in [-1, 6], x >= 0.
///
/// Power series (evaluated in extended precision) for x <= 14, Hankel's
/// large-argument expansion beyond; for nu >= 2 the expansion is applied to
/// the two lowest orders of the same fractional part and the result is
/// carried up by forward recurrence, which is stable because x > nu there.
/// At x = 0 only orders with a finite limit are accepted.
double bessel_j(double nu, double x);

/// J_nu(x) / x^nu, finite at x = 0 with value 2^-nu / Gamma(nu + 1).
double bessel_j_scaled(double nu, double x);

/// Surface area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int d);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
GaussRule gauss_legendre(std::size_t n);

/// Table of orthonormal associated Legendre values
///   pbar(l, m) = sqrt((2l+1) (l-m)! / (l+m)!) P_l^m(cos theta),
/// without the Condon-Shortley phase, for 0 <= m <= l <= lmax. Normalized so
/// that sum over m of the real harmonics squared equals 2l+1 (normalized
/// surface measure). Built by the stable three-term recurrence in l.
class LegendreTable {
 public:
  LegendreTable(int lmax, double cos_theta, double sin_theta);

  double operator()(int l, int m) const { return values_[index(l, m)]; }
  int lmax() const { return lmax_; }

  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
  }

 private:
  int lmax_;
  std::vector<double> values_;
};

/// Legendre polynomial P_l(x) by upward recurrence.
double legendre_p(int l, double x);

}  // namespace cmlab
