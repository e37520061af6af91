#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmlab/manifold.hpp"

namespace cmlab {

inline constexpr double kDefaultExactnessTolerance = 1e-10;

/// Nodes and real weights (negative weights allowed, flagged).
struct QuadratureRule {
  Manifold manifold = Manifold::circle();
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::string name;

  /// Product trapezoid rule on T^d: N^d grid nodes j/N, weights N^{-d}.
  static QuadratureRule trapezoid(const Manifold& m, std::size_t N);
  /// Gauss-Legendre in cos(theta) with n_theta nodes times 2 n_theta
  /// equispaced azimuths, weights summing to 1.
  static QuadratureRule sphere_product(std::size_t n_theta);
  /// "trapezoid:N" (tori) or "product:n_theta" (sphere).
  static QuadratureRule builtin(const Manifold& m, std::string_view spec);

  std::size_t size() const { return nodes.size(); }
  bool positive() const;
};

struct ExactnessCertificate {
  std::string rule;
  std::size_t N = 0;
  std::size_t X_probe = 0;
  std::size_t X_max = 0;  // largest X with residuals 0..X all below tol
  bool probe_exhausted = false;  // every probed index passed: X_max is a lower bound
  std::vector<double> residuals;  // |sum a_j phi_m(x_j) - delta_m0|, m = 0..X_probe
  double tol = 0.0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  std::optional<double> c_hat;       // 1 / (X_max sum a^2)
  std::optional<double> node_ratio;  // N / X_max
  double proof_identity = 0.0;       // sum_{m <= X_max} (sum_j a_j phi_m(x_j))^2
  bool positive_weights = true;
};

/// Residual scan over the first X_probe + 1 eigenfunctions. tol in
/// [1e-12, 1e-6]. Throws Error("weight_sum_violation") when the constant
/// function is not integrated to within tol.
ExactnessCertificate exactness_scan(const QuadratureRule& rule, std::size_t X_probe,
                                    double tol = kDefaultExactnessTolerance);

struct AuditRow {
  std::string rule;
  std::size_t N = 0;
  std::size_t X_max = 0;
  double sum_w2 = 0.0;
  double c_hat = 0.0;       // 1 / (X_max sum a^2)
  double node_ratio = 0.0;  // N / X_max
  double proof_identity = 0.0;
  bool cauchy_schwarz = true;  // sum a^2 >= 1/N - 1e-12
  bool probe_exhausted = false;
};

struct CorollaryAudit {
  std::vector<AuditRow> rows;
  double min_node_ratio = 0.0;
  double max_c_hat = 0.0;
};

/// Scans every rule with default_probe and tabulates the node-count
/// certificate. Rules with X_max = 0 are rejected.
CorollaryAudit corollary_audit(const std::vector<QuadratureRule>& rules,
                               double tol = kDefaultExactnessTolerance);

/// 4N + 16. Generous for the built-in families (trapezoid on the circle
/// fails at 2N - 1, product grids on T^2 near pi N, the sphere product rule
/// near 2N); certificates flag the case where the probe runs out.
std::size_t default_probe(const QuadratureRule& rule);

}  // namespace cmlab
