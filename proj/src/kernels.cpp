#include "cmlab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

#include "cmlab/error.hpp"
#include "cmlab/integrate.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/parallel.hpp"
#include "cmlab/special.hpp"

namespace cmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kPsiRadius = 0.5;
constexpr std::size_t kOrder = 12;
// Fixed rule for F_d psi: 32 oscillations of the kernel over [0, 1/2] at
// rho = kRhoMax, four panels each.
constexpr std::size_t kPsiPanels = 128;
// F_d psi has decayed below 2e-8 by rho = 64 in every supported d, so its
// square (the integrand defining H) is below 1e-15 there.
constexpr double kRhoMax = 64.0;
constexpr std::size_t kRhoPanels = 512;
constexpr std::size_t kHIntervals = 1024;
// H~ decays like exp(-sqrt(c t eps)); t_max = kTailScale / eps puts the
// truncated tail far below the 1e-6 support-lemma tolerance.
constexpr double kTailScale = 400.0;

double int_pow(double x, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= x;
  return p;
}

double unit_bump(double r) {
  const double x = r / kPsiRadius;
  const double gap = 1.0 - x * x;
  return gap > 0.0 ? std::exp(-1.0 / gap) : 0.0;
}

}  // namespace

struct KernelSuite::Shared {
  int d = 0;
  double psi_scale = 0.0;
  // s rule for F_d psi, weights folded with (2 pi)^{d/2} psi(s) s^{d-1}
  std::vector<double> s_nodes, s_weights;
  // rho rule for H, weights folded with (2 pi)^{d/2} (F_d psi)^2 rho^{d-1}
  std::vector<double> rho_nodes, rho_weights;
  std::shared_ptr<RadialProfile> psi;
  std::shared_ptr<RadialProfile> h;

  double fourier_psi(double rho) const {
    if (rho > kRhoMax) return fourier_radial(*psi, rho);
    const double freq = kTwoPi * rho;
    double sum = 0.0;
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
      sum += s_weights[i] * hankel_kernel(d, freq * s_nodes[i]);
    }
    return sum;
  }

  double h_spectral(double r) const {
    const double freq = kTwoPi * r;
    double sum = 0.0;
    for (std::size_t i = 0; i < rho_nodes.size(); ++i) {
      sum += rho_weights[i] * hankel_kernel(d, freq * rho_nodes[i]);
    }
    return sum;
  }
};

namespace {

std::shared_ptr<const KernelSuite::Shared> build_shared(int d) {
  auto sh = std::make_shared<KernelSuite::Shared>();
  sh->d = d;
  const double area = unit_sphere_area(d);

  IntegrationOptions tight;
  tight.tolerance_density = 1e-17;
  tight.relative_tolerance = 1e-15;
  const double norm2 = area * integrate_panels(
                                  [d](double r) {
                                    const double b = unit_bump(r);
                                    return b * b * int_pow(r, d - 1);
                                  },
                                  0.0, kPsiRadius, kPsiRadius / 16.0, tight);
  sh->psi_scale = 1.0 / std::sqrt(norm2);
  const double c = sh->psi_scale;
  sh->psi = std::make_shared<RadialProfile>(RadialProfile::bump(d, kPsiRadius, c));

  // independent check of the normalization on a fixed Gauss rule
  const CompositeRule check = CompositeRule::make(0.0, kPsiRadius, 64, 20);
  const double norm_check = area * check.apply([&](double r) {
    const double v = c * unit_bump(r);
    return v * v * int_pow(r, d - 1);
  });
  if (std::abs(norm_check - 1.0) > 1e-8) {
    throw Error("normalization_failure",
                "psi L2 norm off by " + std::to_string(norm_check - 1.0));
  }

  const double scale = std::pow(kTwoPi, d / 2.0);
  const CompositeRule srule = CompositeRule::make(0.0, kPsiRadius, kPsiPanels, kOrder);
  sh->s_nodes = srule.nodes;
  sh->s_weights.resize(srule.nodes.size());
  for (std::size_t i = 0; i < srule.nodes.size(); ++i) {
    const double s = srule.nodes[i];
    sh->s_weights[i] = scale * srule.weights[i] * c * unit_bump(s) * int_pow(s, d - 1);
  }

  const CompositeRule rrule = CompositeRule::make(0.0, kRhoMax, kRhoPanels, kOrder);
  sh->rho_nodes = rrule.nodes;
  sh->rho_weights.resize(rrule.nodes.size());
  parallel_for(rrule.nodes.size(), [&](std::size_t i) {
    const double rho = rrule.nodes[i];
    const double f = sh->fourier_psi(rho);
    sh->rho_weights[i] = scale * rrule.weights[i] * f * f * int_pow(rho, d - 1);
  });

  std::vector<double> samples(kHIntervals + 1);
  const double step = 1.0 / static_cast<double>(kHIntervals);
  parallel_for(samples.size(), [&](std::size_t i) {
    samples[i] = sh->h_spectral(step * static_cast<double>(i));
  });
  // H vanishes to infinite order at r = 1; the computed value there is
  // quadrature noise
  samples.back() = 0.0;
  sh->h = std::make_shared<RadialProfile>(
      RadialProfile::sampled(d, step, std::move(samples), "H", 0.0));
  return sh;
}

std::shared_ptr<const KernelSuite::Shared> shared_for(int d) {
  static std::array<std::once_flag, kMaxTorusDimension + 1> flags;
  static std::array<std::shared_ptr<const KernelSuite::Shared>, kMaxTorusDimension + 1> cache;
  const auto slot = static_cast<std::size_t>(d);
  std::call_once(flags[slot], [&] { cache[slot] = build_shared(d); });
  return cache[slot];
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

KernelSuite::KernelSuite(std::shared_ptr<const Shared> shared, double lambda_X, double epsilon)
    : shared_(std::move(shared)),
      d_(shared_->d),
      lambda_(lambda_X),
      epsilon_(epsilon),
      psi_scale_(shared_->psi_scale),
      psi_(*shared_->psi),
      h_(*shared_->h),
      fourier_h_(RadialProfile::gaussian(1)),
      phi_(RadialProfile::gaussian(1)),
      eta_(RadialProfile::gaussian(1)),
      g_(RadialProfile::gaussian(1)),
      h_tilde_(RadialProfile::gaussian(1)) {}

double KernelSuite::fourier_psi(double rho) const { return shared_->fourier_psi(rho); }

double KernelSuite::H_spectral(double r) const { return shared_->h_spectral(r); }

double KernelSuite::inverse_cosine_H_tilde(double rho) const {
  const auto& t = *t_nodes_;
  const auto& w = *t_weighted_;
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sum += w[i] * std::cos(rho * t[i]);
  return 2.0 / kPi * sum;
}

double KernelSuite::omega0(double distance) const {
  const double rho = distance / kTwoPi;
  const double f = fourier_psi(lambda_ * rho);
  return 2.0 / std::pow(kTwoPi, d_) * std::pow(lambda_, d_) * f * f * phi_(rho);
}

KernelSuite build_kernel_suite(int d, double lambda_X, double epsilon) {
  if (d < 1 || d > kMaxTorusDimension) {
    throw unsupported_dimension("kernel suite supports 1 <= d <= 4, got " + std::to_string(d));
  }
  if (!(lambda_X > 0.0) || !std::isfinite(lambda_X)) {
    throw invalid_argument("lambda_X must be positive");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw invalid_argument("epsilon must lie in (0, 1]");

  KernelSuite k(shared_for(d), lambda_X, epsilon);
  const auto sh = k.shared_;
  const double band = epsilon / kTwoPi;          // supp phi
  const double plateau = epsilon / (4.0 * kPi);  // phi = 1 below

  k.fourier_h_ = RadialProfile(
      d, kInf, kRhoMax,
      [sh](double rho) {
        const double f = sh->fourier_psi(rho);
        return f * f;
      },
      "F(H)");
  k.phi_ = RadialProfile(
      d, band, band, [band, plateau](double rho) { return smooth_step((band - rho) / plateau); },
      "phi");

  const double t_max = kTailScale / epsilon;
  const double lam_d = std::pow(lambda_X, d);
  k.g_ = RadialProfile(
      d, band, band,
      [sh, lambda_X, lam_d, band, plateau](double rho) {
        const double f = sh->fourier_psi(lambda_X * rho);
        return lam_d * f * f * smooth_step((band - rho) / plateau);
      },
      "G");

  // G rule: half a period of the kernel per panel at t = t_max, plus the
  // oscillation of F_d psi(lambda rho) (period about 2 in its argument)
  const auto g_panels = static_cast<std::size_t>(
      16.0 + std::ceil(2.0 * t_max * band) + std::ceil(2.0 * lambda_X * band));
  const CompositeRule grule = CompositeRule::make(0.0, band, g_panels, kOrder);
  auto g_nodes = std::make_shared<std::vector<double>>(grule.nodes);
  auto g_weights = std::make_shared<std::vector<double>>(grule.nodes.size());
  const double scale = std::pow(kTwoPi, d / 2.0);
  parallel_for(grule.nodes.size(), [&](std::size_t i) {
    const double rho = grule.nodes[i];
    (*g_weights)[i] = scale * grule.weights[i] * k.g_(rho) * int_pow(rho, d - 1);
  });
  k.g_nodes_ = g_nodes;
  k.g_weights_ = g_weights;

  auto h_tilde_at = [d, g_nodes, g_weights](double t) {
    const double freq = kTwoPi * t;
    double sum = 0.0;
    for (std::size_t i = 0; i < g_nodes->size(); ++i) {
      sum += (*g_weights)[i] * hankel_kernel(d, freq * (*g_nodes)[i]);
    }
    return sum;
  };
  k.h_tilde_ = RadialProfile(d, kInf, t_max, h_tilde_at, "H~");
  k.eta_ = fourier_profile(k.phi_, t_max);

  // t rule: panels of length <= 2 and at most a quarter period of cos(4 eps t)
  const double t_panel = std::min(2.0, kPi / (8.0 * epsilon));
  const auto t_panels = static_cast<std::size_t>(std::ceil(t_max / t_panel));
  const CompositeRule trule = CompositeRule::make(0.0, t_max, t_panels, kOrder);
  auto t_nodes = std::make_shared<std::vector<double>>(trule.nodes);
  auto t_weighted = std::make_shared<std::vector<double>>(trule.nodes.size());
  parallel_for(trule.nodes.size(), [&](std::size_t i) {
    (*t_weighted)[i] = trule.weights[i] * h_tilde_at(trule.nodes[i]);
  });
  k.t_nodes_ = t_nodes;
  k.t_weighted_ = t_weighted;

  k.resolution_.h_step = 1.0 / static_cast<double>(kHIntervals);
  k.resolution_.h_rho_max = kRhoMax;
  k.resolution_.h_rho_nodes = sh->rho_nodes.size();
  k.resolution_.g_nodes = g_nodes->size();
  k.resolution_.t_max = t_max;
  k.resolution_.t_nodes = t_nodes->size();
  return k;
}

std::vector<double> support_lemma_grid(double epsilon, std::size_t n) {
  if (n == 0) throw invalid_argument("support lemma grid needs at least one interval");
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = 4.0 * epsilon * static_cast<double>(i) / static_cast<double>(n);
  }
  return grid;
}

SupportLemmaReport verify_support_lemma(const KernelSuite& suite, std::span<const double> grid) {
  const double eps = suite.epsilon();
  if (grid.empty() || *std::max_element(grid.begin(), grid.end()) < 4.0 * eps * (1.0 - 1e-12)) {
    throw invalid_argument("support lemma grid must reach 4 epsilon");
  }
  std::vector<double> values(grid.size());
  parallel_for(grid.size(),
               [&](std::size_t i) { values[i] = suite.inverse_cosine_H_tilde(grid[i]); });

  SupportLemmaReport rep;
  rep.grid_points = grid.size();
  double min_inside = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rep.peak = std::max(rep.peak, std::abs(values[i]));
    if (grid[i] <= eps) {
      min_inside = std::min(min_inside, values[i]);
    } else if (std::abs(values[i]) > tail) {
      tail = std::abs(values[i]);
      rep.argmax_tail = grid[i];
    }
  }
  if (rep.peak > 0.0) {
    rep.max_violation_neg = -min_inside / rep.peak;
    rep.max_tail = tail / rep.peak;
  }
  return rep;
}

void write_profile_csv(const RadialProfile& profile, double r_max, std::size_t samples,
                       const std::string& path) {
  if (samples == 0 || !(r_max > 0.0)) {
    throw invalid_argument("profile export needs r_max > 0 and samples >= 1");
  }
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot open " + path + " for writing");
  out << "r,value\n";
  char line[96];
  for (std::size_t i = 0; i <= samples; ++i) {
    const double r = r_max * static_cast<double>(i) / static_cast<double>(samples);
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", r, profile(r));
    out << line;
  }
  if (!out) throw Error("io_error", "write failed for " + path);
}

}  // namespace cmlab
