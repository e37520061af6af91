#include "cmlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cmlab/enu.hpp"
#include "cmlab/error.hpp"
#include "cmlab/functional.hpp"
#include "cmlab/io.hpp"
#include "cmlab/kernels.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/partition.hpp"
#include "cmlab/point_families.hpp"
#include "cmlab/quadrature.hpp"

namespace cmlab::cli {

namespace {

// What a command produced: a JSON report, or a CSV table plus the JSON
// summary that goes into its sidecar.
struct Output {
  Json report;
  std::optional<std::string> csv;
};

// Options shared by every command. `out` and `config` are never echoed.
struct Common {
  std::string out;
  std::string config;
  std::string format = "json";
};

Error missing_seed(const std::string& command) {
  return Error("missing_seed", command + " is randomized and needs --seed");
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json label_json(const EigenLabel& label, int dim) {
  Json j;
  if (const auto* t = std::get_if<TorusLabel>(&label)) {
    j["k"] = std::vector<int>(t->k.begin(), t->k.begin() + dim);
    j["part"] = std::all_of(t->k.begin(), t->k.begin() + dim, [](int v) { return v == 0; })
                    ? "const"
                    : (t->sine ? "sin" : "cos");
  } else {
    const auto& s = std::get<SphereLabel>(label);
    j["degree"] = s.degree;
    j["order"] = s.order;
    j["part"] = s.order > 0 ? "cos" : (s.order < 0 ? "sin" : "zonal");
  }
  return j;
}

Json bound_report_json(const BoundReport& r) {
  Json j;
  j["manifold"] = r.manifold;
  j["X"] = r.X;
  j["N"] = r.N;
  j["S"] = r.S;
  j["sum_w"] = r.sum_w;
  j["sum_w2"] = r.sum_w2;
  j["lower_trivial"] = r.lower_trivial;
  j["ratio"] = opt_json(r.ratio);
  j["lambda_X"] = r.lambda_X;
  j["truncation"] = truncation_name(r.truncation);
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  j["overflow_warning"] = r.overflow_warning;
  return j;
}

Manifold manifold_for_file(const std::string& flag, const PointFile& pf) {
  if (flag.empty()) return pf.manifold;
  const Manifold m = Manifold::parse(flag);
  if (!(m == pf.manifold)) {
    throw invalid_argument("--manifold " + flag + " does not match the file header " +
                           pf.manifold.name());
  }
  return m;
}

std::size_t resolve_Y(const std::optional<std::size_t>& Y, const std::optional<double>& kappa,
                      const std::optional<std::size_t>& X) {
  if (Y && kappa) throw invalid_argument("give either --Y or --kappa with --X, not both");
  if (Y) return *Y;
  if (!kappa) throw invalid_argument("a partition needs --Y, or --kappa together with --X");
  if (!X) throw invalid_argument("--kappa needs --X (Y = kappa X)");
  if (!(*kappa > 0.0)) throw invalid_argument("--kappa must be positive");
  const auto y = static_cast<std::size_t>(std::llround(*kappa * static_cast<double>(*X)));
  return std::max<std::size_t>(1, y);
}

// ---------------------------------------------------------------- commands

struct SpectrumCmd {
  std::string manifold;
  std::size_t count = 10;
  std::optional<double> T;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold, "torus:d, circle or sphere2")->required();
    app->add_option("--count", count, "number of eigenpairs");
    app->add_option("--T", T, "also count eigenvalues with lambda <= T");
  }
  Json config() const {
    Json c;
    c["command"] = "spectrum";
    c["manifold"] = manifold;
    c["count"] = count;
    c["T"] = opt_json(T);
    return c;
  }
  Output execute() const {
    const Manifold m = Manifold::parse(manifold);
    Json r;
    r["config"] = config();
    Json pairs = Json::array();
    for (const auto& p : enumerate_spectrum(m, count)) {
      Json e;
      e["index"] = p.index;
      e["lambda"] = p.lambda;
      e["label"] = label_json(p.label, m.dimension());
      pairs.push_back(e);
    }
    r["pairs"] = pairs;
    if (T) {
      const auto w = weyl_counting_check(m, *T);
      r["weyl"] = Json{{"T", *T}, {"count", w.count}, {"ratio", w.ratio}};
    }
    return {r, std::nullopt};
  }
};

struct SumCmd {
  std::string manifold;
  std::string points;
  std::size_t X = 0;
  bool smoothed = false;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold, "must match the point file header when given");
    app->add_option("--points", points, "point-set CSV")->required();
    app->add_option("--X", X, "last eigenfunction index")->required();
    app->add_flag("--smoothed", smoothed,
                  "also report the H-weighted sum truncated at lambda_X (frequency)");
  }
  Json config() const {
    Json c;
    c["command"] = "sum";
    c["manifold"] = manifold.empty() ? Json(nullptr) : Json(manifold);
    c["points"] = points;
    c["X"] = X;
    c["smoothed"] = smoothed;
    return c;
  }
  Output execute() const {
    const PointFile pf = read_point_file(points);
    const Manifold m = manifold_for_file(manifold, pf);
    const auto pts = WeightedPointSet::make(m, pf.points, pf.weights);
    Json r = bound_report_json(spectral_sum(pts, X));
    if (smoothed) {
      const int d = m.is_sphere() ? 2 : m.dimension();
      const double lambda = frequency_at_index(m, X);
      if (lambda > 0.0) {
        const KernelSuite suite = build_kernel_suite(d, lambda);
        r["smoothed"] = Json{{"S", smoothed_sum(pts, suite)},
                             {"lambda_X", lambda},
                             {"truncation", truncation_name(Truncation::Frequency)}};
      } else {
        r["smoothed"] = nullptr;
      }
    }
    r["config"] = config();
    return {r, std::nullopt};
  }
};

struct SweepCmd {
  std::string manifold;
  std::string families = "all";
  std::vector<std::size_t> X_list;
  std::string weights = "uniform";
  std::size_t instances = 50;
  std::optional<std::size_t> N;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold)->required();
    app->add_option("--families", families, "comma list of random,lattice,jittered,clustered or all");
    app->add_option("--X-list", X_list, "comma-separated X values")->required()->delimiter(',');
    app->add_option("--weights", weights, "uniform or random");
    app->add_option("--instances", instances, "instances per (family, X)");
    app->add_option("--N", N, "fixed point count (default: drawn from [max(1, X/4), 2X])");
    app->add_option("--seed", seed, "RNG seed (required)");
  }
  Json config() const {
    Json c;
    c["command"] = "sweep";
    c["manifold"] = manifold;
    c["families"] = families;
    c["X-list"] = X_list;
    c["weights"] = weights;
    c["instances"] = instances;
    c["N"] = N ? Json(*N) : Json(nullptr);
    c["seed"] = seed ? Json(*seed) : Json(nullptr);
    return c;
  }
  Output execute(const std::string& format) const {
    if (!seed) throw missing_seed("sweep");
    SweepConfig cfg;
    cfg.manifold = Manifold::parse(manifold);
    cfg.families = parse_families(families);
    cfg.X_list = X_list;
    cfg.weight_mode = parse_weight_mode(weights);
    cfg.seed = *seed;
    cfg.instances = instances;
    cfg.N = N;
    const SweepResult res = empirical_constant_sweep(cfg);

    Json summary;
    summary["config"] = config();
    summary["c_hat"] = res.c_hat;
    summary["log_slope"] = opt_json(res.log_slope);
    Json cells = Json::array();
    for (const auto& c : res.cells) {
      cells.push_back(Json{{"family", std::string(family_name(c.family))},
                           {"X", c.X},
                           {"min_ratio", c.min_ratio},
                           {"min_upper_ratio", c.min_upper_ratio}});
    }
    summary["cells"] = cells;

    if (format == "csv") {
      std::string csv = "family,X,instance,S,ratio\n";
      for (const auto& row : res.rows) {
        csv += std::string(family_name(row.family)) + "," + std::to_string(row.X) + "," +
               std::to_string(row.instance) + "," + format_double(row.S) + "," +
               format_double(row.ratio) + "\n";
      }
      return {summary, csv};
    }
    Json rows = Json::array();
    for (const auto& row : res.rows) {
      rows.push_back(Json{{"family", std::string(family_name(row.family))},
                          {"X", row.X},
                          {"instance", row.instance},
                          {"N", row.N},
                          {"S", row.S},
                          {"sum_w", row.sum_w},
                          {"sum_w2", row.sum_w2},
                          {"ratio", row.ratio},
                          {"upper_ratio", row.upper_ratio}});
    }
    summary["rows"] = rows;
    return {summary, std::nullopt};
  }
};

struct ExpectationCmd {
  std::string manifold;
  std::size_t X = 0;
  std::size_t N = 0;
  std::string weights = "uniform";
  std::size_t trials = 10000;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold)->required();
    app->add_option("--X", X)->required();
    app->add_option("--N", N, "number of points per trial")->required();
    app->add_option("--weights", weights, "uniform or random (drawn once from the seed)");
    app->add_option("--trials", trials);
    app->add_option("--seed", seed, "RNG seed (required)");
  }
  Json config() const {
    Json c;
    c["command"] = "expectation";
    c["manifold"] = manifold;
    c["X"] = X;
    c["N"] = N;
    c["weights"] = weights;
    c["trials"] = trials;
    c["seed"] = seed ? Json(*seed) : Json(nullptr);
    return c;
  }
  Output execute() const {
    if (!seed) throw missing_seed("expectation");
    if (N == 0) throw invalid_argument("--N must be >= 1");
    const Manifold m = Manifold::parse(manifold);
    // weights come from a stream no trial uses
    CounterRng wrng(*seed, ~std::uint64_t{0});
    const auto w = generate_weights(parse_weight_mode(weights), N, wrng);
    const auto res = expectation_mc(m, X, w, trials, *seed);
    Json r;
    r["manifold"] = m.name();
    r["X"] = X;
    r["N"] = N;
    r["mean"] = res.mean;
    r["std_err"] = res.std_err;
    r["target"] = res.target;
    r["z_score"] = res.std_err > 0.0 ? Json((res.mean - res.target) / res.std_err) : Json(nullptr);
    r["min"] = res.min;
    r["trials"] = res.trials;
    r["seed"] = res.seed;
    r["config"] = config();
    return {r, std::nullopt};
  }
};

struct KernelVerifyCmd {
  int d = 2;
  double lambda_X = 20.0;
  double epsilon = kDefaultEpsilon;
  std::size_t grid = 400;
  std::string profiles;

  void attach(CLI::App* app) {
    app->add_option("--d", d, "ambient dimension 1..4");
    app->add_option("--lambda-X", lambda_X, "frequency scale");
    app->add_option("--epsilon", epsilon, "band parameter in (0, 1]");
    app->add_option("--grid", grid, "intervals of the support-lemma grid on [0, 4 epsilon]");
    app->add_option("--profiles", profiles, "path prefix for r,value CSV exports of every profile");
  }
  Json config() const {
    Json c;
    c["command"] = "kernel-verify";
    c["d"] = d;
    c["lambda-X"] = lambda_X;
    c["epsilon"] = epsilon;
    c["grid"] = grid;
    c["profiles"] = profiles.empty() ? Json(nullptr) : Json(profiles);
    return c;
  }
  Output execute() const {
    const KernelSuite k = build_kernel_suite(d, lambda_X, epsilon);
    const auto& res = k.resolution();
    Json r;
    r["suite"] = Json{{"d", d},
                      {"lambda_X", lambda_X},
                      {"epsilon", epsilon},
                      {"psi_scale", k.psi_scale()},
                      {"h_step", res.h_step},
                      {"h_rho_max", res.h_rho_max},
                      {"h_rho_nodes", res.h_rho_nodes},
                      {"g_nodes", res.g_nodes},
                      {"t_max", res.t_max},
                      {"t_nodes", res.t_nodes}};

    double h_max = 0.0;
    for (std::size_t i = 0; i <= 1024; ++i) h_max = std::max(h_max, k.H()(static_cast<double>(i) / 1024.0));
    double tail = 0.0;
    for (std::size_t i = 0; i <= 100; ++i) {
      tail = std::max(tail, std::abs(k.H_spectral(1.0 + 0.5 * static_cast<double>(i) / 100.0)));
    }
    double fh_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 200; ++i) {
      fh_min = std::min(fh_min, k.fourier_H()(8.0 * static_cast<double>(i) / 199.0));
    }
    double omega_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 100; ++i) {
      omega_min = std::min(omega_min, k.omega0(kPiForCli * static_cast<double>(i) / 99.0));
    }
    const auto grid_pts = support_lemma_grid(epsilon, grid);
    const auto lemma = verify_support_lemma(k, grid_pts);
    r["checks"] = Json{{"H0", k.H()(0.0)},
                       {"H_max", h_max},
                       {"H_tail_max", tail},
                       {"fourier_H_min", fh_min},
                       {"psi_integral", fourier_radial(k.psi(), 0.0)},
                       {"omega0_min", omega_min}};
    r["support_lemma"] = Json{{"peak", lemma.peak},
                              {"max_violation_neg", lemma.max_violation_neg},
                              {"max_tail", lemma.max_tail},
                              {"argmax_tail", lemma.argmax_tail},
                              {"grid_points", lemma.grid_points}};
    if (!profiles.empty()) {
      const double band = epsilon / (2.0 * kPiForCli);
      write_profile_csv(k.psi(), 0.5, 512, profiles + "psi.csv");
      write_profile_csv(k.H(), 1.0, 1024, profiles + "H.csv");
      write_profile_csv(k.fourier_H(), 8.0, 512, profiles + "fourier_H.csv");
      write_profile_csv(k.phi(), band, 512, profiles + "phi.csv");
      write_profile_csv(k.fourier_H_tilde(), band, 512, profiles + "fourier_H_tilde.csv");
      write_profile_csv(k.H_tilde(), 4.0 / band, 1024, profiles + "H_tilde.csv");
    }
    r["config"] = config();
    return {r, std::nullopt};
  }
  static constexpr double kPiForCli = 3.141592653589793;
};

struct EnuVerifyCmd {
  int d = 3;
  double nu = 1.2;
  double z = 1.0;
  double s = 2.0;

  void attach(CLI::App* app) {
    app->add_option("--d", d);
    app->add_option("--nu", nu, "order strictly inside ((d-1)/2, d/2)");
    app->add_option("--z", z, "|z| > 0");
    app->add_option("--s", s, "s > 0 with s |z| <= 100");
  }
  Json config() const {
    Json c;
    c["command"] = "enu-verify";
    c["d"] = d;
    c["nu"] = nu;
    c["z"] = z;
    c["s"] = s;
    return c;
  }
  Output execute() const {
    const auto e = verify_enu_identity(d, nu, z, s);
    Json r;
    r["lhs"] = e.lhs;
    r["rhs"] = e.rhs;
    r["rel_err"] = e.rel_err;
    r["scale"] = e.scale;
    r["half_periods"] = e.half_periods;
    r["config"] = config();
    return {r, std::nullopt};
  }
};

Json region_json(const Manifold& m, const Region& reg) {
  Json j;
  j["center"] = std::vector<double>(reg.center.view().begin(), reg.center.view().end());
  j["inner_radius"] = reg.inner_radius;
  j["outer_radius"] = reg.outer_radius;
  j["measure"] = reg.measure;
  if (m.is_sphere()) {
    j["theta"] = {reg.sphere.theta_lo, reg.sphere.theta_hi};
    j["phi"] = {reg.sphere.phi_lo, reg.sphere.phi_hi};
  } else {
    const int d = m.dimension();
    j["lo"] = std::vector<double>(reg.torus.lo.begin(), reg.torus.lo.begin() + d);
    j["hi"] = std::vector<double>(reg.torus.hi.begin(), reg.torus.hi.begin() + d);
  }
  return j;
}

struct PartitionCmd {
  std::string manifold;
  std::optional<std::size_t> Y;
  std::optional<double> kappa;
  std::optional<std::size_t> X;
  std::size_t verify_samples = 0;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold)->required();
    app->add_option("--Y", Y, "number of regions");
    app->add_option("--kappa", kappa, "Y = round(kappa X)");
    app->add_option("--X", X, "used with --kappa");
    app->add_option("--verify-samples", verify_samples, "Monte Carlo samples (0 = skip, else >= 10000)");
    app->add_option("--seed", seed, "RNG seed (required with --verify-samples)");
  }
  Json config() const {
    Json c;
    c["command"] = "partition";
    c["manifold"] = manifold;
    c["Y"] = Y ? Json(*Y) : Json(nullptr);
    c["kappa"] = opt_json(kappa);
    c["X"] = X ? Json(*X) : Json(nullptr);
    c["verify-samples"] = verify_samples;
    c["seed"] = seed ? Json(*seed) : Json(nullptr);
    return c;
  }
  Output execute() const {
    if (verify_samples > 0 && !seed) throw missing_seed("partition --verify-samples");
    const Manifold m = Manifold::parse(manifold);
    const std::size_t y = resolve_Y(Y, kappa, X);
    const Partition p = Partition::equal_measure(m, y);
    Json r;
    r["manifold"] = m.name();
    r["Y"] = y;
    if (m.is_sphere()) r["band_counts"] = p.band_counts();
    Json regions = Json::array();
    for (const auto& reg : p.regions()) regions.push_back(region_json(m, reg));
    r["regions"] = regions;
    if (verify_samples > 0) {
      const auto v = verify_partition(p, verify_samples, *seed);
      r["verification"] = Json{{"samples", v.samples},
                               {"cover_fraction", v.cover_fraction},
                               {"max_sigma", v.max_sigma},
                               {"max_analytic_error", v.max_analytic_error},
                               {"analytic_total", v.analytic_total},
                               {"c1_hat", v.c1_hat},
                               {"c2_hat", v.c2_hat},
                               {"measure_errors", v.measure_errors}};
    }
    r["config"] = config();
    return {r, std::nullopt};
  }
};

struct BucketCmd {
  std::string manifold;
  std::string points;
  std::optional<std::size_t> Y;
  std::optional<double> kappa;
  std::optional<std::size_t> X;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold, "must match the point file header when given");
    app->add_option("--points", points, "point-set CSV")->required();
    app->add_option("--Y", Y, "number of regions");
    app->add_option("--kappa", kappa, "Y = round(kappa X)");
    app->add_option("--X", X, "used with --kappa");
  }
  Json config() const {
    Json c;
    c["command"] = "bucket";
    c["manifold"] = manifold.empty() ? Json(nullptr) : Json(manifold);
    c["points"] = points;
    c["Y"] = Y ? Json(*Y) : Json(nullptr);
    c["kappa"] = opt_json(kappa);
    c["X"] = X ? Json(*X) : Json(nullptr);
    return c;
  }
  Output execute() const {
    const PointFile pf = read_point_file(points);
    const Manifold m = manifold_for_file(manifold, pf);
    const auto pts = WeightedPointSet::make(m, pf.points, pf.weights);
    const std::size_t y = resolve_Y(Y, kappa, X);
    const Partition p = Partition::equal_measure(m, y);
    const auto buckets = bucket_points(p, pts);
    Json r;
    r["manifold"] = m.name();
    r["Y"] = y;
    r["N"] = pts.size();
    r["R"] = buckets.size();
    Json list = Json::array();
    for (const auto& b : buckets) {
      list.push_back(Json{{"region", b.region}, {"K", b.K}, {"S", b.S}, {"members", b.members}});
    }
    r["buckets"] = list;
    r["config"] = config();
    return {r, std::nullopt};
  }
};

Json certificate_json(const ExactnessCertificate& c) {
  Json j;
  j["rule"] = c.rule;
  j["N"] = c.N;
  j["X_probe"] = c.X_probe;
  j["X_max"] = c.X_max;
  j["probe_exhausted"] = c.probe_exhausted;
  j["tol"] = c.tol;
  j["sum_w"] = c.sum_w;
  j["sum_w2"] = c.sum_w2;
  j["c_hat"] = opt_json(c.c_hat);
  j["node_ratio"] = opt_json(c.node_ratio);
  j["proof_identity"] = c.proof_identity;
  j["positive_weights"] = c.positive_weights;
  j["residuals"] = c.residuals;
  return j;
}

struct QuadScanCmd {
  std::string manifold;
  std::string rule;
  std::string rule_file;
  std::optional<std::size_t> X_probe;
  double tol = kDefaultExactnessTolerance;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold, "required with --rule");
    app->add_option("--rule", rule, "built-in rule: trapezoid:N or product:n_theta");
    app->add_option("--rule-file", rule_file, "rule CSV with a weight column");
    app->add_option("--X-probe", X_probe, "indices to scan (default 4N + 16)");
    app->add_option("--tol", tol, "residual tolerance in [1e-12, 1e-6]");
  }
  Json config() const {
    Json c;
    c["command"] = "quad-scan";
    c["manifold"] = manifold.empty() ? Json(nullptr) : Json(manifold);
    c["rule"] = rule.empty() ? Json(nullptr) : Json(rule);
    c["rule-file"] = rule_file.empty() ? Json(nullptr) : Json(rule_file);
    c["X-probe"] = X_probe ? Json(*X_probe) : Json(nullptr);
    c["tol"] = tol;
    return c;
  }
  Output execute() const {
    if (rule.empty() == rule_file.empty()) {
      throw invalid_argument("give exactly one of --rule and --rule-file");
    }
    QuadratureRule q;
    if (!rule.empty()) {
      if (manifold.empty()) throw invalid_argument("--rule needs --manifold");
      q = QuadratureRule::builtin(Manifold::parse(manifold), rule);
    } else {
      const PointFile pf = read_point_file(rule_file);
      if (!pf.has_weights) {
        throw Error("bad_point_file", rule_file + ": a quadrature rule needs a weight column");
      }
      q.manifold = manifold_for_file(manifold, pf);
      q.nodes = pf.points;
      q.weights = pf.weights;
      q.name = rule_file;
    }
    const auto cert = exactness_scan(q, X_probe.value_or(default_probe(q)), tol);
    Json r = certificate_json(cert);
    r["manifold"] = q.manifold.name();
    r["config"] = config();
    return {r, std::nullopt};
  }
};

struct QuadAuditCmd {
  std::string manifold;
  std::vector<std::string> rules;
  double tol = kDefaultExactnessTolerance;

  void attach(CLI::App* app) {
    app->add_option("--manifold", manifold)->required();
    app->add_option("--rules", rules, "comma list of built-in rules")->required()->delimiter(',');
    app->add_option("--tol", tol, "residual tolerance in [1e-12, 1e-6]");
  }
  Json config() const {
    Json c;
    c["command"] = "quad-audit";
    c["manifold"] = manifold;
    c["rules"] = rules;
    c["tol"] = tol;
    return c;
  }
  Output execute(const std::string& format) const {
    const Manifold m = Manifold::parse(manifold);
    std::vector<QuadratureRule> list;
    for (const auto& spec : rules) list.push_back(QuadratureRule::builtin(m, spec));
    const auto audit = corollary_audit(list, tol);
    Json r;
    r["manifold"] = m.name();
    r["min_node_ratio"] = audit.min_node_ratio;
    r["max_c_hat"] = audit.max_c_hat;
    std::string csv = "rule,N,X_max,sum_w2,c_hat,node_ratio,proof_identity\n";
    Json rows = Json::array();
    for (const auto& row : audit.rows) {
      rows.push_back(Json{{"rule", row.rule},
                          {"N", row.N},
                          {"X_max", row.X_max},
                          {"sum_w2", row.sum_w2},
                          {"c_hat", row.c_hat},
                          {"node_ratio", row.node_ratio},
                          {"proof_identity", row.proof_identity},
                          {"cauchy_schwarz", row.cauchy_schwarz},
                          {"probe_exhausted", row.probe_exhausted}});
      csv += row.rule + "," + std::to_string(row.N) + "," + std::to_string(row.X_max) + "," +
             format_double(row.sum_w2) + "," + format_double(row.c_hat) + "," +
             format_double(row.node_ratio) + "," + format_double(row.proof_identity) + "\n";
    }
    r["config"] = config();
    if (format == "csv") return {r, csv};
    r["rows"] = rows;
    return {r, std::nullopt};
  }
};

// ------------------------------------------------------------- plumbing

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  Json j;
  j["error"] = Json{{"code", code}, {"message", message}};
  err << dump_json(j, 0);
}

bool numerical_failure(const std::string& code) {
  return code == "non_convergence" || code == "acceleration_divergence" ||
         code == "normalization_failure";
}

std::string scalar_arg(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  throw invalid_argument("config values must be scalars or arrays of scalars");
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Expands --config <file> into explicit flags. Flags given on the command
// line win over the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;

  Json file;
  try {
    file = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw Error("bad_config", path + ": " + e.what());
  }
  const Json cfg = file.contains("config") ? file["config"] : file;
  if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string()) {
    throw Error("bad_config", path + ": no \"command\" entry");
  }
  const std::string command = cfg["command"].get<std::string>();

  std::vector<std::string> out{rest.empty() ? std::string("cmlab") : rest.front()};
  out.push_back(command);
  std::vector<std::string> user(rest.begin() + (rest.empty() ? 0 : 1), rest.end());
  if (!user.empty() && user.front() == command) user.erase(user.begin());
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command") continue;
    const std::string flag = "--" + it.key();
    if (has_flag(user, flag)) continue;
    const Json& v = it.value();
    if (v.is_null()) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
      continue;
    }
    std::string text;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) text += (i ? "," : "") + scalar_arg(v[i]);
    } else {
      text = scalar_arg(v);
    }
    out.push_back(flag);
    out.push_back(text);
  }
  out.insert(out.end(), user.begin(), user.end());
  return out;
}

void emit(const Output& o, const Common& common, std::ostream& out) {
  if (o.csv) {
    if (common.out.empty()) {
      out << *o.csv;
      return;
    }
    write_text_file(common.out, *o.csv);
    write_text_file(common.out + ".config.json", dump_json(o.report));
    return;
  }
  const std::string text = dump_json(o.report);
  if (common.out.empty()) {
    out << text;
  } else {
    write_text_file(common.out, text);
  }
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return 2;
  }

  CLI::App app{"Spectral discrepancy laboratory: Cassels-Montgomery sums, kernels, partitions, "
               "quadrature audits"};
  app.require_subcommand(1);
  Common common;

  SpectrumCmd spectrum;
  SumCmd sum;
  SweepCmd sweep;
  ExpectationCmd expectation;
  KernelVerifyCmd kernel;
  EnuVerifyCmd enu;
  PartitionCmd partition;
  BucketCmd bucket;
  QuadScanCmd quad_scan;
  QuadAuditCmd quad_audit;

  std::map<std::string, std::function<Output()>> handlers;
  auto add = [&](const std::string& name, const std::string& help, auto& cmd, bool tabular,
                 std::function<Output()> handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.attach(sub);
    sub->add_option("--out", common.out, "output file (default: standard output)");
    sub->add_option("--config", common.config, "replay the config embedded in a report");
    if (tabular) {
      sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }
    handlers[name] = std::move(handler);
  };
  add("spectrum", "list eigenpairs (and optionally a Weyl count)", spectrum, false,
      [&] { return spectrum.execute(); });
  add("sum", "Cassels-Montgomery sum of a point file", sum, false, [&] { return sum.execute(); });
  add("sweep", "empirical constant sweep over point families", sweep, true,
      [&] { return sweep.execute(common.format); });
  add("expectation", "Monte Carlo check of the expectation identity", expectation, false,
      [&] { return expectation.execute(); });
  add("kernel-verify", "build the kernel suite and check its properties", kernel, false,
      [&] { return kernel.execute(); });
  add("enu-verify", "oscillatory-integral vs Bessel identity", enu, false,
      [&] { return enu.execute(); });
  add("partition", "equal-measure partition (optionally Monte Carlo verified)", partition, false,
      [&] { return partition.execute(); });
  add("bucket", "bucket a point file into partition regions", bucket, false,
      [&] { return bucket.execute(); });
  add("quad-scan", "exactness certificate of one quadrature rule", quad_scan, false,
      [&] { return quad_scan.execute(); });
  add("quad-audit", "node-count audit over a family of rules", quad_audit, true,
      [&] { return quad_audit.execute(common.format); });

  // CLI11 reports missing required options before leftover arguments; an
  // unknown flag is the more useful diagnosis, so look for one first.
  if (args.size() > 1) {
    if (const CLI::App* sub = app.get_subcommand_no_throw(args[1])) {
      for (std::size_t i = 2; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        const std::string flag = a.substr(0, a.find('='));
        if (sub->get_option_no_throw(flag) == nullptr) {
          print_error(err, "unknown_flag", "unknown flag " + flag + " for " + args[1]);
          return 2;
        }
      }
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ExtrasError& e) {
    print_error(err, "unknown_flag", e.what());
    return 2;
  } catch (const CLI::RequiredError& e) {
    print_error(err, "missing_argument", e.what());
    return 2;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage_error", e.what());
    return 2;
  }

  const auto subs = app.get_subcommands();
  const std::string name = subs.front()->get_name();
  try {
    emit(handlers.at(name)(), common, out);
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return numerical_failure(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    print_error(err, "internal_error", e.what());
    return 1;
  }
  return 0;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cmlab::cli
