#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cmlab/radial.hpp"

namespace cmlab {

inline constexpr double kDefaultEpsilon = 0.5;

/// Grid and truncation data for a kernel suite, echoed into reports.
struct KernelResolution {
  double h_step = 0.0;          // sampling step of H on [0, 1]
  double h_rho_max = 0.0;       // truncation of the F_d H integral defining H
  std::size_t h_rho_nodes = 0;  // quadrature nodes for that integral
  std::size_t g_nodes = 0;      // quadrature nodes for F_d of the band-limited G
  double t_max = 0.0;           // truncation of the cosine transform of H~
  std::size_t t_nodes = 0;      // quadrature nodes on [0, t_max]
};

/// The kernel family built from one smooth bump.
///
///   psi    c exp(-1 / (1 - (2r)^2)) on r < 1/2, unit L^2 norm in R^d
///   H      F_d[(F_d psi)^2] = psi * psi, sampled on [0, 1]
///   phi    smooth plateau: 1 on [0, eps/4pi], 0 beyond eps/2pi
///   eta    F_d phi
///   G      lambda^d F_d H(lambda rho) phi(rho) = F_d H~
///   H~     F_d G, i.e. H(./lambda) convolved with eta
///
/// H depends only on d and is shared between suites of the same dimension.
class KernelSuite {
 public:
  int dimension() const { return d_; }
  double lambda_X() const { return lambda_; }
  double epsilon() const { return epsilon_; }
  double psi_scale() const { return psi_scale_; }
  const KernelResolution& resolution() const { return resolution_; }

  const RadialProfile& psi() const { return psi_; }
  const RadialProfile& H() const { return h_; }
  const RadialProfile& fourier_H() const { return fourier_h_; }
  const RadialProfile& phi() const { return phi_; }
  const RadialProfile& eta() const { return eta_; }
  /// Profile of F_d H~ (compactly supported in [0, eps/2pi]).
  const RadialProfile& fourier_H_tilde() const { return g_; }
  const RadialProfile& H_tilde() const { return h_tilde_; }

  /// F_d psi from the suite's fixed quadrature.
  double fourier_psi(double rho) const;
  /// H(r) straight from its defining spectral integral (no interpolation,
  /// evaluated for any r >= 0, including r > 1).
  double H_spectral(double r) const;
  /// C^{-1} H~(rho) = (2/pi) int_0^t_max H~(t) cos(rho t) dt on the
  /// tabulated H~.
  double inverse_cosine_H_tilde(double rho) const;
  /// Main-term surrogate (2/(2pi)^d) lambda^d F_d H(lambda D/2pi) F_d eta(D/2pi),
  /// using F_d eta = phi.
  double omega0(double distance) const;

  struct Shared;

 private:
  friend KernelSuite build_kernel_suite(int d, double lambda_X, double epsilon);
  KernelSuite(std::shared_ptr<const Shared> shared, double lambda_X, double epsilon);

  std::shared_ptr<const Shared> shared_;
  int d_;
  double lambda_;
  double epsilon_;
  double psi_scale_;
  KernelResolution resolution_;
  RadialProfile psi_, h_, fourier_h_, phi_, eta_, g_, h_tilde_;
  // G rule: nodes, and weight * G(rho) * rho^{d-1} * (2 pi)^{d/2} per node.
  std::shared_ptr<std::vector<double>> g_nodes_, g_weights_;
  // tabulated H~ on the t rule, premultiplied by the quadrature weights
  std::shared_ptr<std::vector<double>> t_nodes_, t_weighted_;
};

/// d in 1..4, lambda_X > 0, epsilon in (0, 1].
KernelSuite build_kernel_suite(int d, double lambda_X, double epsilon = kDefaultEpsilon);

/// B(t) = E(t) / (E(t) + E(1 - t)) with E(t) = exp(-1/t) for t > 0; 0 for
/// t <= 0 and 1 for t >= 1.
double smooth_step(double t);

struct SupportLemmaReport {
  double peak = 0.0;               // max |C^{-1} H~| over the grid
  double max_violation_neg = 0.0;  // max(0, -min over rho <= eps) / peak
  double max_tail = 0.0;           // max over rho > eps of |value| / peak
  double argmax_tail = 0.0;        // where the tail maximum occurs
  std::size_t grid_points = 0;
};

/// Evaluates C^{-1} H~ on `grid` (must reach 4 eps) and reports the sign
/// and support violations relative to the peak.
SupportLemmaReport verify_support_lemma(const KernelSuite& suite, std::span<const double> grid);

/// n + 1 equispaced points on [0, 4 eps].
std::vector<double> support_lemma_grid(double epsilon, std::size_t n = 400);

/// Writes "r,value" rows for r = i * r_max / samples, i = 0..samples.
void write_profile_csv(const RadialProfile& profile, double r_max, std::size_t samples,
                       const std::string& path);

}  // namespace cmlab
