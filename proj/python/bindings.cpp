#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cmlab/cli.hpp"
#include "cmlab/enu.hpp"
#include "cmlab/error.hpp"
#include "cmlab/functional.hpp"
#include "cmlab/kernels.hpp"
#include "cmlab/manifold.hpp"
#include "cmlab/partition.hpp"
#include "cmlab/point_families.hpp"
#include "cmlab/quadrature.hpp"
#include "cmlab/radial.hpp"
#include "cmlab/special.hpp"

namespace py = pybind11;
using namespace cmlab;

namespace {

Manifold manifold_arg(const std::string& name) { return Manifold::parse(name); }

std::vector<Point> points_arg(const Manifold& m, const std::vector<std::vector<double>>& coords) {
  std::vector<Point> pts;
  pts.reserve(coords.size());
  for (const auto& c : coords) pts.push_back(make_point(m, c));
  return pts;
}

std::vector<std::vector<double>> points_out(const std::vector<Point>& pts) {
  std::vector<std::vector<double>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(p.view().begin(), p.view().end());
  return out;
}

WeightedPointSet point_set(const std::string& manifold, const std::vector<std::vector<double>>& coords,
                           std::optional<std::vector<double>> weights) {
  const Manifold m = manifold_arg(manifold);
  auto pts = points_arg(m, coords);
  if (!weights) return WeightedPointSet::uniform(m, std::move(pts));
  return WeightedPointSet::make(m, std::move(pts), std::move(*weights));
}

py::object opt(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict bound_report(const BoundReport& r) {
  py::dict d;
  d["manifold"] = r.manifold;
  d["X"] = r.X;
  d["N"] = r.N;
  d["S"] = r.S;
  d["sum_w"] = r.sum_w;
  d["sum_w2"] = r.sum_w2;
  d["lower_trivial"] = r.lower_trivial;
  d["ratio"] = opt(r.ratio);
  d["lambda_X"] = r.lambda_X;
  d["truncation"] = truncation_name(r.truncation);
  d["seed"] = r.seed ? py::cast(*r.seed) : py::none();
  d["overflow_warning"] = r.overflow_warning;
  return d;
}

py::dict certificate(const ExactnessCertificate& c) {
  py::dict d;
  d["rule"] = c.rule;
  d["N"] = c.N;
  d["X_probe"] = c.X_probe;
  d["X_max"] = c.X_max;
  d["probe_exhausted"] = c.probe_exhausted;
  d["residuals"] = c.residuals;
  d["tol"] = c.tol;
  d["sum_w"] = c.sum_w;
  d["sum_w2"] = c.sum_w2;
  d["c_hat"] = opt(c.c_hat);
  d["node_ratio"] = opt(c.node_ratio);
  d["proof_identity"] = c.proof_identity;
  d["positive_weights"] = c.positive_weights;
  return d;
}

QuadratureRule rule_arg(const std::string& manifold, const std::string& spec) {
  return QuadratureRule::builtin(manifold_arg(manifold), spec);
}

}  // namespace

PYBIND11_MODULE(_cmlab, m) {
  m.doc() = "Cassels-Montgomery spectral sums on tori and the 2-sphere";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<Error>(m, "CmlabError", PyExc_RuntimeError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("code") = e.code();
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  m.def("bessel_j", &bessel_j, py::arg("nu"), py::arg("x"));

  m.def(
      "spectrum",
      [](const std::string& manifold, std::size_t count) {
        const Manifold mf = manifold_arg(manifold);
        py::list out;
        for (const auto& p : enumerate_spectrum(mf, count)) {
          out.append(py::make_tuple(p.index, p.lambda, describe(p.label, mf.dimension())));
        }
        return out;
      },
      py::arg("manifold"), py::arg("count"), "First `count` eigenpairs as (index, frequency, label).");

  m.def(
      "eigenfunction",
      [](const std::string& manifold, std::size_t index, const std::vector<double>& x) {
        const Manifold mf = manifold_arg(manifold);
        const auto pairs = enumerate_spectrum(mf, index + 1);
        return eval_eigenfunction(mf, pairs.back(), make_point(mf, x));
      },
      py::arg("manifold"), py::arg("index"), py::arg("x"));

  m.def(
      "spectral_sum",
      [](const std::string& manifold, const std::vector<std::vector<double>>& points, std::size_t X,
         std::optional<std::vector<double>> weights) {
        return bound_report(spectral_sum(point_set(manifold, points, std::move(weights)), X));
      },
      py::arg("manifold"), py::arg("points"), py::arg("X"), py::arg("weights") = py::none(),
      "S = sum_{m<=X} |sum_j a_j phi_m(x_j)|^2 with its bounds; uniform weights by default.");

  m.def(
      "smoothed_sum",
      [](const std::string& manifold, const std::vector<std::vector<double>>& points, double lambda_X,
         std::optional<std::vector<double>> weights, double epsilon) {
        const auto pts = point_set(manifold, points, std::move(weights));
        const int d = pts.manifold.is_sphere() ? 2 : pts.manifold.dimension();
        return smoothed_sum(pts, build_kernel_suite(d, lambda_X, epsilon));
      },
      py::arg("manifold"), py::arg("points"), py::arg("lambda_X"), py::arg("weights") = py::none(),
      py::arg("epsilon") = kDefaultEpsilon);

  m.def(
      "expectation",
      [](const std::string& manifold, std::size_t X, const std::vector<double>& weights, std::size_t trials,
         std::uint64_t seed) {
        const auto r = expectation_mc(manifold_arg(manifold), X, weights, trials, seed);
        py::dict d;
        d["mean"] = r.mean;
        d["std_err"] = r.std_err;
        d["target"] = r.target;
        d["min"] = r.min;
        d["trials"] = r.trials;
        d["seed"] = r.seed;
        return d;
      },
      py::arg("manifold"), py::arg("X"), py::arg("weights"), py::arg("trials"), py::arg("seed"));

  m.def(
      "sweep",
      [](const std::string& manifold, const std::vector<std::size_t>& X_list, std::uint64_t seed,
         const std::string& families, const std::string& weights, std::size_t instances,
         std::optional<std::size_t> N) {
        SweepConfig cfg;
        cfg.manifold = manifold_arg(manifold);
        cfg.families = parse_families(families);
        cfg.X_list = X_list;
        cfg.weight_mode = parse_weight_mode(weights);
        cfg.seed = seed;
        cfg.instances = instances;
        cfg.N = N;
        const auto res = empirical_constant_sweep(cfg);
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d;
          d["family"] = std::string(family_name(r.family));
          d["X"] = r.X;
          d["instance"] = r.instance;
          d["N"] = r.N;
          d["S"] = r.S;
          d["ratio"] = r.ratio;
          d["upper_ratio"] = r.upper_ratio;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["c_hat"] = res.c_hat;
        out["log_slope"] = opt(res.log_slope);
        return out;
      },
      py::arg("manifold"), py::arg("X_list"), py::arg("seed"), py::arg("families") = "all",
      py::arg("weights") = "uniform", py::arg("instances") = 50, py::arg("N") = py::none());

  m.def(
      "generate_points",
      [](const std::string& manifold, const std::string& family, std::size_t n, std::uint64_t seed) {
        CounterRng rng(seed, 0);
        return points_out(generate_points(manifold_arg(manifold), parse_family(family), n, rng));
      },
      py::arg("manifold"), py::arg("family"), py::arg("n"), py::arg("seed"));

  py::class_<KernelSuite>(m, "KernelSuite")
      .def(py::init([](int d, double lambda_X, double epsilon) { return build_kernel_suite(d, lambda_X, epsilon); }),
           py::arg("d"), py::arg("lambda_X"), py::arg("epsilon") = kDefaultEpsilon)
      .def_property_readonly("dimension", &KernelSuite::dimension)
      .def_property_readonly("lambda_X", &KernelSuite::lambda_X)
      .def_property_readonly("epsilon", &KernelSuite::epsilon)
      .def("psi", [](const KernelSuite& k, double r) { return k.psi()(r); })
      .def("H", [](const KernelSuite& k, double r) { return k.H()(r); })
      .def("fourier_H", [](const KernelSuite& k, double r) { return k.fourier_H()(r); })
      .def("phi", [](const KernelSuite& k, double r) { return k.phi()(r); })
      .def("H_tilde", [](const KernelSuite& k, double r) { return k.H_tilde()(r); })
      .def("inverse_cosine_H_tilde", &KernelSuite::inverse_cosine_H_tilde)
      .def("omega0", &KernelSuite::omega0)
      .def(
          "support_lemma",
          [](const KernelSuite& k, std::size_t grid) {
            const auto r = verify_support_lemma(k, support_lemma_grid(k.epsilon(), grid));
            py::dict d;
            d["peak"] = r.peak;
            d["max_violation_neg"] = r.max_violation_neg;
            d["max_tail"] = r.max_tail;
            d["argmax_tail"] = r.argmax_tail;
            d["grid_points"] = r.grid_points;
            return d;
          },
          py::arg("grid") = 400);

  m.def(
      "fourier_gaussian",
      [](int d, double rho) { return fourier_radial(RadialProfile::gaussian(d), rho); }, py::arg("d"),
      py::arg("rho"), "F_d of exp(-pi r^2) evaluated by quadrature.");
  m.def(
      "transplant_check",
      [](int d, int d_prime, double s) {
        const auto g = RadialProfile::gaussian(d);
        return py::make_tuple(double_transform(g, d_prime, s, 6.0), transplant(g, d_prime, s));
      },
      py::arg("d"), py::arg("d_prime"), py::arg("s"), "(direct, transplanted) for a Gaussian.");

  m.def(
      "enu_check",
      [](int d, double nu, double z, double s) {
        const auto e = verify_enu_identity(d, nu, z, s);
        py::dict out;
        out["lhs"] = e.lhs;
        out["rhs"] = e.rhs;
        out["rel_err"] = e.rel_err;
        out["half_periods"] = e.half_periods;
        return out;
      },
      py::arg("d"), py::arg("nu"), py::arg("z"), py::arg("s"));

  py::class_<Partition>(m, "Partition")
      .def(py::init([](const std::string& manifold, std::size_t Y) {
             return Partition::equal_measure(manifold_arg(manifold), Y);
           }),
           py::arg("manifold"), py::arg("Y"))
      .def("__len__", &Partition::size)
      .def("locate", [](const Partition& p, const std::vector<double>& x) {
        return p.locate(make_point(p.manifold(), x));
      })
      .def("measures", [](const Partition& p) {
        std::vector<double> out;
        for (const auto& r : p.regions()) out.push_back(r.measure);
        return out;
      })
      .def_property_readonly("band_counts", &Partition::band_counts)
      .def(
          "verify",
          [](const Partition& p, std::size_t samples, std::uint64_t seed) {
            const auto c = verify_partition(p, samples, seed);
            py::dict d;
            d["cover_fraction"] = c.cover_fraction;
            d["max_sigma"] = c.max_sigma;
            d["max_analytic_error"] = c.max_analytic_error;
            d["c1_hat"] = c.c1_hat;
            d["c2_hat"] = c.c2_hat;
            return d;
          },
          py::arg("samples"), py::arg("seed"))
      .def(
          "bucket",
          [](const Partition& p, const std::vector<std::vector<double>>& points,
             std::optional<std::vector<double>> weights) {
            const auto set = point_set(p.manifold().name(), points, std::move(weights));
            py::list out;
            for (const auto& b : bucket_points(p, set)) out.append(py::make_tuple(b.region, b.K, b.S, b.members));
            return out;
          },
          py::arg("points"), py::arg("weights") = py::none());

  m.def(
      "exactness_scan",
      [](const std::string& manifold, const std::string& rule, std::optional<std::size_t> X_probe, double tol) {
        const auto q = rule_arg(manifold, rule);
        return certificate(exactness_scan(q, X_probe.value_or(default_probe(q)), tol));
      },
      py::arg("manifold"), py::arg("rule"), py::arg("X_probe") = py::none(),
      py::arg("tol") = kDefaultExactnessTolerance);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"cmlab"};
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = cli::run(full, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process: (exit code, stdout, stderr).");
}
