#include "cmlab/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmlab/error.hpp"
#include "cmlab/functional.hpp"
#include "cmlab/special.hpp"
#include "cmlab/summation.hpp"

namespace cmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || v == 0) {
    throw invalid_argument("bad " + std::string(what) + " count '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

bool QuadratureRule::positive() const {
  return std::all_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
}

QuadratureRule QuadratureRule::trapezoid(const Manifold& m, std::size_t N) {
  if (m.is_sphere()) throw invalid_argument("the trapezoid rule lives on tori");
  if (N == 0) throw invalid_argument("trapezoid rule needs N >= 1");
  const int d = m.dimension();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= N;
  QuadratureRule rule;
  rule.manifold = m;
  rule.name = "trapezoid:" + std::to_string(N);
  rule.nodes.reserve(total);
  for (std::size_t r = 0; r < total; ++r) {
    std::array<double, 4> c{};
    std::size_t rest = r;
    for (int i = d - 1; i >= 0; --i) {
      c[i] = static_cast<double>(rest % N) / static_cast<double>(N);
      rest /= N;
    }
    rule.nodes.push_back(make_point(m, std::span<const double>(c.data(), d)));
  }
  rule.weights.assign(total, 1.0 / static_cast<double>(total));
  return rule;
}

QuadratureRule QuadratureRule::sphere_product(std::size_t n_theta) {
  if (n_theta == 0) throw invalid_argument("product rule needs n_theta >= 1");
  const GaussRule gl = gauss_legendre(n_theta);
  const std::size_t n_phi = 2 * n_theta;
  QuadratureRule rule;
  rule.manifold = Manifold::sphere2();
  rule.name = "product:" + std::to_string(n_theta);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double z = gl.nodes[i];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (std::size_t k = 0; k < n_phi; ++k) {
      const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(n_phi);
      rule.nodes.push_back(sphere_point(r * std::cos(phi), r * std::sin(phi), z));
      rule.weights.push_back(gl.weights[i] / (2.0 * static_cast<double>(n_phi)));
    }
  }
  return rule;
}

QuadratureRule QuadratureRule::builtin(const Manifold& m, std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw invalid_argument("rule must look like 'trapezoid:N' or 'product:n', got '" +
                           std::string(spec) + "'");
  }
  const auto kind = spec.substr(0, colon);
  const auto count = parse_count(spec.substr(colon + 1), kind);
  if (kind == "trapezoid") return trapezoid(m, count);
  if (kind == "product") {
    if (!m.is_sphere()) throw invalid_argument("the product rule lives on sphere2");
    return sphere_product(count);
  }
  throw invalid_argument("unknown built-in rule '" + std::string(kind) + "'");
}

std::size_t default_probe(const QuadratureRule& rule) { return 4 * rule.size() + 16; }

ExactnessCertificate exactness_scan(const QuadratureRule& rule, std::size_t X_probe, double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw invalid_argument("tol must lie in [1e-12, 1e-6]");
  if (rule.nodes.empty() || rule.nodes.size() != rule.weights.size()) {
    throw invalid_argument("a quadrature rule needs N >= 1 nodes with one weight each");
  }
  const auto spectrum = Spectrum::first(rule.manifold, X_probe + 1);
  const auto c = spectral_coefficients(*spectrum, rule.nodes, rule.weights);

  ExactnessCertificate cert;
  cert.rule = rule.name;
  cert.N = rule.size();
  cert.X_probe = X_probe;
  cert.tol = tol;
  cert.positive_weights = rule.positive();
  cert.sum_w = compensated_sum(rule.weights);
  CompensatedSum w2;
  for (double a : rule.weights) w2.add(a * a);
  cert.sum_w2 = w2.value();

  cert.residuals.resize(c.size());
  for (std::size_t m = 0; m < c.size(); ++m) cert.residuals[m] = std::abs(c[m] - (m == 0 ? 1.0 : 0.0));
  if (!(cert.residuals[0] < tol)) {
    throw Error("weight_sum_violation", "weights sum to " + std::to_string(cert.sum_w) +
                                            ", the constant function is not integrated exactly");
  }
  std::size_t x_max = 0;
  while (x_max + 1 < c.size() && cert.residuals[x_max + 1] < tol) ++x_max;
  cert.X_max = x_max;
  cert.probe_exhausted = x_max == X_probe;

  CompensatedSum identity;
  for (std::size_t m = 0; m <= x_max; ++m) identity.add(c[m] * c[m]);
  cert.proof_identity = identity.value();
  if (x_max >= 1) {
    cert.c_hat = 1.0 / (static_cast<double>(x_max) * cert.sum_w2);
    cert.node_ratio = static_cast<double>(cert.N) / static_cast<double>(x_max);
  }
  return cert;
}

CorollaryAudit corollary_audit(const std::vector<QuadratureRule>& rules, double tol) {
  if (rules.empty()) throw invalid_argument("corollary audit needs at least one rule");
  CorollaryAudit audit;
  audit.min_node_ratio = std::numeric_limits<double>::infinity();
  for (const auto& rule : rules) {
    const auto cert = exactness_scan(rule, default_probe(rule), tol);
    if (cert.X_max == 0) {
      throw invalid_argument("rule " + rule.name + " is not exact beyond the constant function");
    }
    AuditRow row;
    row.rule = rule.name;
    row.N = cert.N;
    row.X_max = cert.X_max;
    row.sum_w2 = cert.sum_w2;
    row.c_hat = *cert.c_hat;
    row.node_ratio = *cert.node_ratio;
    row.proof_identity = cert.proof_identity;
    row.cauchy_schwarz = cert.sum_w2 >= 1.0 / static_cast<double>(cert.N) - 1e-12;
    row.probe_exhausted = cert.probe_exhausted;
    audit.min_node_ratio = std::min(audit.min_node_ratio, row.node_ratio);
    audit.max_c_hat = std::max(audit.max_c_hat, row.c_hat);
    audit.rows.push_back(row);
  }
  return audit;
}

}  // namespace cmlab
