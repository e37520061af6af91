// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cmlab/cli.hpp"
#include "cmlab/enu.hpp"
#include "cmlab/functional.hpp"
#include "cmlab/kernels.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/parallel.hpp"
#include "cmlab/partition.hpp"
#include "cmlab/point_families.hpp"
#include "cmlab/quadrature.hpp"
#include "cmlab/radial.hpp"
#include "cmlab/rng.hpp"

using namespace cmlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. S >= (sum a)^2 on random instances.
void trivial_lower_bound(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const Manifold manifolds[] = {Manifold::torus(1), Manifold::torus(2), Manifold::sphere2()};
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng(20240101, i);
    const Manifold& m = manifolds[i % 3];
    const auto N = static_cast<std::size_t>(rng.uniform_int(1, 50));
    const auto X = static_cast<std::size_t>(rng.uniform_int(0, 200));
    const auto family = static_cast<PointFamily>(rng.uniform_int(0, 3));
    auto pts = generate_points(m, family, N, rng);
    std::vector<double> w(N);
    for (auto& a : w) a = rng.uniform(0.01, 3.0);
    const auto r = spectral_sum(WeightedPointSet::make(m, pts, w), X);
    const double margin = (r.S - r.lower_trivial) / r.lower_trivial;
    worst = std::min(worst, margin);
    v.require(r.S >= r.lower_trivial - 1e-9 * r.lower_trivial, "instance " + std::to_string(i));
  }
  const double t = seconds_since(t0);
  v.require(t < 10.0, "runtime");
  v.detail << "200 instances, min (S-(sum a)^2)/(sum a)^2 = " << worst << ", " << t << " s";
}

// 2. One point of unit weight: S = sum of phi_m(x)^2.
void single_point_identity(Verdict& v) {
  double err_torus = 0.0;
  CounterRng rng(2, 0);
  for (std::size_t X = 2; X <= 200; X += 2) {
    const auto pts = WeightedPointSet::make(Manifold::torus(1), {random_point(Manifold::torus(1), rng)}, {1.0});
    err_torus = std::max(err_torus, std::abs(spectral_sum(pts, X).S - static_cast<double>(X + 1)));
  }
  // addition theorem: sum over the 2l+1 harmonics of degree l is 2l+1
  double err_sphere = 0.0;
  for (int L = 0; L <= 12; ++L) {
    const auto X = static_cast<std::size_t>((L + 1) * (L + 1) - 1);
    double oracle = 0.0;
    for (int l = 0; l <= L; ++l) oracle += 2.0 * l + 1.0;
    for (int rep = 0; rep < 5; ++rep) {
      const auto pts = WeightedPointSet::make(Manifold::sphere2(), {random_point(Manifold::sphere2(), rng)}, {1.0});
      err_sphere = std::max(err_sphere, std::abs(spectral_sum(pts, X).S - oracle));
    }
  }
  v.require(err_torus <= 1e-10, "torus");
  v.require(err_sphere <= 1e-8, "sphere");
  v.detail << "max |S-(X+1)| = " << err_torus << " (circle), max |S-(L+1)^2| = " << err_sphere
           << " (sphere, L<=12)";
}

// 3. Monte Carlo mean of Phi against X sum a^2.
void expectation_identity(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> w(20, 1.0 / 20.0);
  int within = 0;
  double worst_z = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = expectation_mc(Manifold::torus(2), 50, w, 10000, seed);
    const double z = std::abs(r.mean - r.target) / r.std_err;
    worst_z = std::max(worst_z, z);
    if (z <= 4.0) ++within;
    v.require(r.min <= r.mean, "min <= mean for seed " + std::to_string(seed));
    v.require(std::abs(r.target - 50.0 / 20.0) < 1e-12, "target");
  }
  const double t = seconds_since(t0);
  v.require(within >= 18, "seeds within 4 std_err");
  v.require(t < 60.0, "runtime");
  v.detail << within << "/20 seeds within 4 std_err (max |z| = " << worst_z << "), " << t << " s";
}

// 4. Sweep on the circle: bounded below, and the upper-bound regime is reached.
void empirical_sharpness(Verdict& v) {
  // The lattice family alone pins the ratio near N/X >= 1/2 on the circle;
  // a floor of 1/4 leaves room for sampling noise in N. A flat trend has
  // log-slope near zero; -0.15 is about three times the scatter of the
  // per-X minima over ln(128/16).
  constexpr double kFloor = 0.25;
  constexpr double kSlopeFloor = -0.15;
  SweepConfig cfg;
  cfg.manifold = Manifold::torus(1);
  cfg.families = parse_families("all");
  cfg.X_list = {16, 32, 64, 128};
  cfg.seed = 4;
  cfg.instances = 50;
  const auto res = empirical_constant_sweep(cfg);
  v.require(res.rows.size() == 4 * 4 * 50, "row count");
  v.require(res.c_hat >= kFloor, "min ratio floor");
  v.require(res.log_slope && *res.log_slope >= kSlopeFloor, "trend");
  std::ostringstream upper;
  for (std::size_t X : cfg.X_list) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : res.rows) {
      if (row.X == X && row.family == PointFamily::Random) best = std::min(best, row.upper_ratio);
    }
    v.require(best <= 1.1, "upper regime at X=" + std::to_string(X));
    upper << (upper.tellp() > 0 ? "," : "") << best;
  }
  v.detail << "min ratio = " << res.c_hat << ", log-slope = " << res.log_slope.value_or(NAN)
           << ", best random S/(X sum a^2 + (sum a)^2) per X = " << upper.str();
}

// 5. Kernel suite at (d, lambda_X, eps) = (2, 20, 0.5).
void kernel_suite(Verdict& v) {
  const KernelSuite k = build_kernel_suite(2, 20.0, 0.5);
  const double h0 = k.H()(0.0);
  double fh_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) fh_min = std::min(fh_min, k.fourier_H()(16.0 * i / 199.0));
  double beyond = 0.0;
  for (int i = 1; i <= 50; ++i) beyond = std::max(beyond, std::abs(k.H_spectral(1.0 + i / 50.0)));
  const auto lemma = verify_support_lemma(k, support_lemma_grid(0.5, 400));
  v.require(std::abs(h0 - 1.0) <= 1e-8, "H(0)");
  v.require(fh_min >= -1e-10, "F_d H >= 0");
  v.require(k.H().support_radius() <= 1.0 && beyond <= 1e-10, "supp H");
  v.require(lemma.max_tail <= 1e-6, "tail beyond eps");
  v.require(lemma.max_violation_neg <= 1e-6, "sign on [0, eps]");
  v.detail << "|H(0)-1| = " << std::abs(h0 - 1.0) << ", min F_dH = " << fh_min
           << ", max |H| on (1,2] = " << beyond << ", tail/peak = " << lemma.max_tail
           << ", neg/peak = " << lemma.max_violation_neg;
}

// 6. Transform oracles.
void transform_oracles(Verdict& v) {
  double self_dual = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const auto g = RadialProfile::gaussian(d);
    for (double rho : {0.0, 0.1, 0.35, 0.7, 1.0, 1.5, 2.2}) {
      self_dual = std::max(self_dual, std::abs(fourier_radial(g, rho) - std::exp(-kPi * rho * rho)));
    }
  }
  // F_d is an involution on radial functions; round trip a compact bump
  double round_trip = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const auto f = RadialProfile::bump(d, 1.0);
    const auto Ff = fourier_profile(f, 40.0);
    for (double r : {0.0, 0.2, 0.45, 0.7, 0.9}) {
      round_trip = std::max(round_trip, std::abs(fourier_radial(Ff, r) - f(r)));
    }
  }
  double transplant_err = 0.0;
  const double args[] = {0.05, 0.15, 0.25, 0.4, 0.5, 0.65, 0.8, 1.0, 1.2, 1.5};
  for (auto [d, dp] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const auto g = RadialProfile::gaussian(d);
    for (double s : args) {
      transplant_err = std::max(transplant_err, std::abs(double_transform(g, dp, s, 6.0) - transplant(g, dp, s)));
    }
  }
  v.require(self_dual <= 1e-6, "self-duality");
  v.require(round_trip <= 1e-5, "round trip");
  v.require(transplant_err <= 1e-5, "transplantation");
  v.detail << "Gaussian self-duality " << self_dual << ", round trip " << round_trip
           << ", transplantation " << transplant_err << " (10 arguments per pair)";
}

// 7. Oscillatory integral against the Bessel side, with Boost supplying J.
void enu_strip(Verdict& v) {
  const std::pair<double, double> pairs[] = {{0.5, 1.0}, {1.0, 2.0}, {2.0, 1.5}, {0.3, 10.0},
                                             {1.5, 4.0}, {4.0, 2.5}, {0.8, 7.0}, {2.5, 6.0},
                                             {5.0, 3.8}, {1.2, 0.6}};
  double worst = 0.0;
  for (auto [d, nu] : {std::pair{3, 1.2}, {2, 0.75}}) {
    const double mu = d / 2.0 - 1.0 - nu;
    for (auto [z, s] : pairs) {
      const double x = s * z;
      const double rhs = std::pow(kPi, -d / 2.0) * std::pow(2.0, -nu - d / 2.0) *
                         std::pow(s, d - 2.0 * nu - 1.0) * boost::math::cyl_bessel_j(mu, x) /
                         std::pow(x, mu);
      const auto e = verify_enu_identity(d, nu, z, s);
      worst = std::max(worst, std::abs(e.lhs - rhs) / std::abs(rhs));
    }
  }
  v.require(worst <= 1e-3, "relative error");
  v.detail << "max relative error " << worst << " over 20 (d, nu, z, s) cases";
}

// 8. Smoothed sum against the direct lattice double sum.
void torus_oracle(Verdict& v) {
  double worst = 0.0;
  std::vector<KernelSuite> suites;
  for (double f : {3.0, 7.5, 12.0, 20.0}) suites.push_back(build_kernel_suite(2, 2.0 * kPi * f));
  for (std::uint64_t i = 0; i < 50; ++i) {
    CounterRng rng(8, i);
    const KernelSuite& k = suites[i % suites.size()];
    const auto N = static_cast<std::size_t>(rng.uniform_int(1, 8));
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t j = 0; j < N; ++j) {
      pts.push_back(random_point(Manifold::torus(2), rng));
      w.push_back(rng.uniform(0.1, 1.0));
    }
    const auto set = WeightedPointSet::make(Manifold::torus(2), pts, w);
    const double fast = smoothed_sum(set, k);
    double direct = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) direct += w[a] * w[b] * torus_kernel_oracle(2, k, pts[a], pts[b]);
    }
    worst = std::max(worst, std::abs(fast - direct) / std::abs(direct));
  }
  v.require(worst <= 1e-8, "relative error");
  v.detail << "max relative difference " << worst << " over 50 instances";
}

// 9. Equal-measure partitions.
void partitions(Verdict& v) {
  std::ostringstream consts;
  double c1_min = INFINITY, c1_max = 0, c2_min = INFINITY, c2_max = 0, worst_measure = 0, min_cover = 1;
  for (std::size_t Y : {25, 100, 400}) {
    const auto p = Partition::equal_measure(Manifold::sphere2(), Y);
    const auto check = verify_partition(p, 100000, 9);
    worst_measure = std::max(worst_measure, check.max_analytic_error);
    min_cover = std::min(min_cover, check.cover_fraction);
    c1_min = std::min(c1_min, check.c1_hat);
    c1_max = std::max(c1_max, check.c1_hat);
    c2_min = std::min(c2_min, check.c2_hat);
    c2_max = std::max(c2_max, check.c2_hat);
    v.require(p.size() == Y, "region count");
  }
  v.require(worst_measure <= 1e-9, "analytic measure");
  v.require(min_cover == 1.0, "disjoint cover");
  v.require(c1_max / c1_min <= 1.5 && c2_max / c2_min <= 1.5, "radius constants");
  const auto grid = verify_partition(Partition::equal_measure(Manifold::torus(2), 64), 10000, 9);
  v.require(grid.c1_hat == 0.5, "torus c1");
  v.require(grid.c2_hat == std::sqrt(2.0) / 2.0, "torus c2");
  v.detail << "sphere: max |measure-1/Y| = " << worst_measure << ", cover = " << min_cover
           << ", c1 in [" << c1_min << "," << c1_max << "], c2 in [" << c2_min << "," << c2_max
           << "]; torus grid c1 = " << grid.c1_hat << ", c2 = " << grid.c2_hat;
}

// 10. Node-count audit of the built-in rules.
void corollary(Verdict& v) {
  std::vector<QuadratureRule> trap;
  for (std::size_t N : {8, 16, 32, 64}) trap.push_back(QuadratureRule::trapezoid(Manifold::torus(1), N));
  const auto audit = corollary_audit(trap);
  double prev = INFINITY;
  std::ostringstream ratios;
  for (const auto& row : audit.rows) {
    v.require(row.X_max == 2 * (row.N - 1), "X_max for N=" + std::to_string(row.N));
    v.require(std::abs(row.proof_identity - 1.0) <= 1e-9, "proof identity");
    v.require(std::abs(row.sum_w2 - 1.0 / row.N) <= 1e-15, "sum a^2");
    v.require(row.node_ratio < prev && row.node_ratio > 0.5, "monotone ratio");
    prev = row.node_ratio;
    ratios << (ratios.tellp() > 0 ? "," : "") << row.node_ratio;
  }
  const auto scan = exactness_scan(trap.back(), default_probe(trap.back()));
  double max_res = 0.0;
  for (std::size_t m = 0; m <= scan.X_max; ++m) max_res = std::max(max_res, scan.residuals[m]);
  v.require(max_res < 1e-10, "residuals");
  std::ostringstream sph;
  for (std::size_t n : {2, 4, 8}) {
    const auto c = exactness_scan(QuadratureRule::sphere_product(n), default_probe(QuadratureRule::sphere_product(n)));
    v.require(c.X_max == 4 * n * n - 1, "sphere X_max for n_theta=" + std::to_string(n));
    sph << (sph.tellp() > 0 ? "," : "") << c.X_max;
  }
  v.detail << "trapezoid N/X_max = " << ratios.str() << ", sphere product X_max = " << sph.str();
}

// 11. Byte-identical reports for repeated randomized runs, also across
// worker counts.
void determinism(Verdict& v) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("cmlab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--manifold", "torus:1", "--X-list", "16,32,64,128", "--seed", "4", "--format", "csv"},
      {"sweep", "--manifold", "sphere2", "--X-list", "15,35", "--instances", "10", "--weights", "random", "--seed", "5"},
      {"expectation", "--manifold", "torus:2", "--X", "50", "--N", "20", "--trials", "10000", "--seed", "7"},
      {"partition", "--manifold", "sphere2", "--Y", "100", "--verify-samples", "100000", "--seed", "9"},
  };
  std::size_t files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::string> contents;
    for (unsigned workers : {1u, 1u, 4u}) {
      set_worker_count(workers);
      const fs::path out = dir / ("run" + std::to_string(c) + "_" + std::to_string(contents.size()));
      auto args = commands[c];
      args.insert(args.begin(), "cmlab");
      args.push_back("--out");
      args.push_back(out.string());
      std::ostringstream so, se;
      const int rc = cli::run(args, so, se);
      v.require(rc == 0, "command " + std::to_string(c) + " exit " + std::to_string(rc) + " " + se.str());
      std::string text = slurp(out);
      if (fs::exists(out.string() + ".config.json")) text += slurp(out.string() + ".config.json");
      contents.push_back(text);
      ++files;
    }
    v.require(!contents[0].empty() && contents[0] == contents[1] && contents[1] == contents[2],
              "command " + std::to_string(c) + " differs");
  }
  set_worker_count(0);
  fs::remove_all(dir);
  v.detail << commands.size() << " randomized commands x 3 runs (1, 1, 4 workers), " << files
           << " reports compared";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"trivial lower bound", trivial_lower_bound},
      {"single-point identity", single_point_identity},
      {"expectation identity", expectation_identity},
      {"empirical sharpness", empirical_sharpness},
      {"kernel suite", kernel_suite},
      {"transform oracles", transform_oracles},
      {"oscillatory strip identity", enu_strip},
      {"torus kernel oracle", torus_oracle},
      {"equal-measure partitions", partitions},
      {"node-count audit", corollary},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    if (!v.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
