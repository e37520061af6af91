#pragma once

namespace cmlab {

struct EnuCheck {
  double lhs = 0.0;      // oscillatory-integral side
  double rhs = 0.0;      // Bessel side
  double rel_err = 0.0;  // |lhs - rhs| / max(|rhs|, tiny)
  double scale = 0.0;    // magnitude of the Bessel side at z -> 0, for absolute checks
  int half_periods = 0;  // segments consumed before the accelerated sums settled
};

/// Compares the two sides of
///
///   2^{1-2nu} / (pi^{(d+1)/2} Gamma(a)) int_z^inf t (t^2 - z^2)^{a-1} cos(s t) dt
///     = pi^{-d/2} 2^{-nu-d/2} s^{d-2nu-1} J_mu(s z) / (s z)^mu,
///
/// a = nu + (1-d)/2, mu = d/2 - 1 - nu, for nu strictly inside
/// ((d-1)/2, d/2) where the left side converges as an improper integral.
///
/// The integral is cut at the zeros of cos(s t); the first piece is
/// desingularized by v = (t^2 - z^2)^a and the alternating tail of pieces is
/// summed with repeated averaging of partial sums (Euler's transformation).
/// Throws Error("acceleration_divergence") if the accelerated sums have not
/// settled after 200 half-periods.
EnuCheck verify_enu_identity(int d, double nu, double z_abs, double s);

}  // namespace cmlab
