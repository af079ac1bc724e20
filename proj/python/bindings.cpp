#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "cxrisk/acceptance.hpp"
#include "cxrisk/catalog.hpp"
#include "cxrisk/composition.hpp"
#include "cxrisk/duality.hpp"
#include "cxrisk/errors.hpp"
#include "cxrisk/runner.hpp"
#include "cxrisk/scenario.hpp"

namespace py = pybind11;
using namespace cxrisk;

namespace {

// Component vectors cross the boundary as plain lists; +inf as float('inf').
using Vec = std::vector<double>;

ComponentVector cv(const Vec& v) { return ComponentVector(v); }
double f(ExtendedReal v) { return v.raw(); }

SetProperty parse_property(const std::string& name) {
  if (name == "f-monotone") return SetProperty::f_monotone;
  if (name == "b-monotone") return SetProperty::b_monotone;
  if (name == "convex") return SetProperty::convex;
  throw std::invalid_argument("unknown set property '" + name + "' (expected f-monotone, b-monotone or convex)");
}

TrialSpec spec(std::uint64_t trials, std::uint64_t seed, double tolerance) { return {trials, seed, tolerance}; }

BisectionConfig bisection(double tolerance, double max_magnitude) {
  BisectionConfig c;
  c.tolerance = tolerance;
  c.max_magnitude = max_magnitude;
  return c;
}

py::dict dual_dict(const DualResult& d) {
  py::dict out;
  out["value"] = d.value;
  if (d.argmax) {
    out["yhat"] = d.argmax->yhat.vector();
    out["xhat_block_sums"] = d.argmax->xhat_block_sums.vector();
  } else {
    out["yhat"] = py::none();
    out["xhat_block_sums"] = py::none();
  }
  out["alpha"] = d.alpha ? py::cast(f(d.alpha->value)) : py::none();
  out["candidates"] = d.candidates;
  out["finite_candidates"] = d.finite_candidates;
  out["subsampled"] = d.subsampled;
  out["diagnostic"] = d.diagnostic;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complex risk statistics: composition, decomposition, acceptance sets and duality.";
  m.attr("__version__") = std::string(kVersion);

  auto shape_error = py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  auto range_error = py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<NotInImageError>(m, "NotInImageError", range_error.ptr());
  py::register_exception<SectionUnavailableError>(m, "SectionUnavailableError", PyExc_RuntimeError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)shape_error;

  py::class_<ScenarioSpace>(m, "ScenarioSpace")
      .def(py::init<std::vector<std::size_t>>(), py::arg("k"))
      .def_property_readonly("k", &ScenarioSpace::shape)
      .def_property_readonly("components", &ScenarioSpace::components)
      .def("__eq__", [](const ScenarioSpace& a, const ScenarioSpace& b) { return a == b; })
      .def("__repr__", [](const ScenarioSpace& s) {
        std::string r = "ScenarioSpace([";
        for (std::size_t i = 0; i < s.components(); ++i) r += (i ? ", " : "") + std::to_string(s.scenarios(i));
        return r + "])";
      });

  py::class_<ScenarioVector>(m, "ScenarioVector")
      .def(py::init<ScenarioSpace, std::vector<std::vector<double>>>(), py::arg("space"), py::arg("blocks"))
      .def_static("constant_blocks",
                  [](const ScenarioSpace& s, const Vec& t) { return ScenarioVector::constant_blocks(s, t); })
      .def_static("unflatten", [](const ScenarioSpace& s, const Vec& v) { return ScenarioVector::unflatten(s, v); })
      .def_property_readonly("space", &ScenarioVector::space)
      .def_property_readonly("blocks", &ScenarioVector::blocks)
      .def("flatten", &ScenarioVector::flatten)
      .def("__eq__", [](const ScenarioVector& a, const ScenarioVector& b) { return a == b; });

  m.def("block_sum", [](const ScenarioVector& x) { return block_sum(x).vector(); });
  m.def("preorder_geq", &preorder_geq, py::arg("x"), py::arg("y"));
  m.def("block_embed", &block_embed, py::arg("x"), py::arg("i"));

  py::class_<SimpleRiskStatistic>(m, "SimpleRiskStatistic")
      .def_static("weighted_sum", &SimpleRiskStatistic::weighted_sum, py::arg("weights"))
      .def_static("max", &SimpleRiskStatistic::max, py::arg("d"))
      .def_static("log_sum_exp", &SimpleRiskStatistic::log_sum_exp, py::arg("d"), py::arg("temperature"))
      .def_static(
          "custom",
          [](std::size_t d, std::string name, std::function<double(Vec)> fn) {
            return SimpleRiskStatistic::custom(d, std::move(name), [fn](std::span<const double> x) {
              return ExtendedReal(fn(Vec(x.begin(), x.end())));
            });
          },
          py::arg("d"), py::arg("name"), py::arg("fn"))
      .def_property_readonly("family", [](const SimpleRiskStatistic& r) { return std::string(to_string(r.family())); })
      .def_property_readonly("name", &SimpleRiskStatistic::name)
      .def_property_readonly("dimension", &SimpleRiskStatistic::dimension)
      .def("__call__", [](const SimpleRiskStatistic& r, const Vec& x) { return f(eval_simple(r, cv(x))); });

  py::class_<ClusteringFunction>(m, "ClusteringFunction")
      .def_static("neg_average", &ClusteringFunction::neg_average, py::arg("space"), py::arg("gamma"))
      .def_static("expm1_link", &ClusteringFunction::expm1_link, py::arg("space"), py::arg("gamma"))
      .def_property_readonly("family", [](const ClusteringFunction& c) { return std::string(to_string(c.family())); })
      .def_property_readonly("name", &ClusteringFunction::name)
      .def_property_readonly("space", &ClusteringFunction::space)
      .def("__call__", [](const ClusteringFunction& c, const ScenarioVector& x) { return eval_clustering(c, x).vector(); });

  py::class_<ComplexRiskStatistic>(m, "ComplexRiskStatistic")
      .def_property_readonly("simple", &ComplexRiskStatistic::simple)
      .def_property_readonly("clustering", &ComplexRiskStatistic::clustering)
      .def_property_readonly("space", &ComplexRiskStatistic::space)
      .def_property_readonly("reconstructed",
                             [](const ComplexRiskStatistic& r) { return r.provenance() == Provenance::reconstructed; })
      .def("__call__", [](const ComplexRiskStatistic& r, const ScenarioVector& x) { return f(eval_complex(r, x)); });

  py::class_<AxiomReport>(m, "AxiomReport")
      .def_property_readonly("check", [](const AxiomReport& r) { return std::string(to_string(r.check)); })
      .def_readonly("trials", &AxiomReport::trials)
      .def_readonly("violations", &AxiomReport::violations)
      .def_readonly("skipped", &AxiomReport::skipped)
      .def_readonly("infinite", &AxiomReport::infinite)
      .def_readonly("worst_margin", &AxiomReport::worst_margin)
      .def_readonly("seed", &AxiomReport::seed)
      .def_readonly("tolerance", &AxiomReport::tolerance)
      .def_property_readonly("passed", &AxiomReport::passed)
      .def("__repr__", [](const AxiomReport& r) {
        return "AxiomReport(" + std::string(to_string(r.check)) + ", trials=" + std::to_string(r.trials) +
               ", violations=" + std::to_string(r.violations) + ", skipped=" + std::to_string(r.skipped) + ")";
      });

  // Evaluation, conjugates and sections.
  m.def("eval_simple", [](const SimpleRiskStatistic& r, const Vec& x) { return f(eval_simple(r, cv(x))); });
  m.def("eval_clustering", [](const ClusteringFunction& c, const ScenarioVector& x) { return eval_clustering(c, x).vector(); });
  m.def("compose", &compose, py::arg("simple"), py::arg("clustering"));
  m.def("eval_complex", [](const ComplexRiskStatistic& r, const ScenarioVector& x) { return f(eval_complex(r, x)); });
  m.def("conjugate_simple", [](const SimpleRiskStatistic& r, const Vec& y) { return f(conjugate_simple(r, cv(y))); });
  m.def("conjugate_maximizer",
        [](const SimpleRiskStatistic& r, const Vec& x) { return conjugate_maximizer(r, cv(x)).vector(); });
  m.def("section_clustering", [](const ClusteringFunction& c, const Vec& x) { return section_clustering(c, cv(x)); });

  // Decomposition.
  m.def(
      "reconstruct_clustering",
      [](const ComplexRiskStatistic& r, const ScenarioVector& x) { return reconstruct_clustering(r)(x).vector(); },
      py::arg("rho"), py::arg("x"));
  m.def(
      "reconstruct_simple",
      [](const ComplexRiskStatistic& r, const Vec& x, double tol, double cap) {
        return f(reconstruct_simple(r, cv(x), bisection(tol, cap)));
      },
      py::arg("rho"), py::arg("x"), py::arg("tolerance") = 1e-10, py::arg("max_magnitude") = 0x1p60);
  m.def(
      "solve_block_ray",
      [](const ComplexRiskStatistic& r, std::size_t i, double target) {
        const auto s = solve_block_ray(r, i, target);
        return py::make_tuple(s.t, s.residual);
      },
      py::arg("rho"), py::arg("i"), py::arg("target"));
  m.def(
      "decompose", [](const ComplexRiskStatistic& r) { return decompose(r); }, py::arg("rho"));

  // Property suites.
  m.def(
      "check_axiom",
      [](py::object subject, const std::string& axiom, std::uint64_t trials, std::uint64_t seed, double tolerance) {
        const Check c = parse_check(axiom);
        const TrialSpec s = spec(trials, seed, tolerance);
        if (py::isinstance<SimpleRiskStatistic>(subject)) return check_axiom(subject.cast<const SimpleRiskStatistic&>(), c, s);
        if (py::isinstance<ClusteringFunction>(subject)) return check_axiom(subject.cast<const ClusteringFunction&>(), c, s);
        if (py::isinstance<ComplexRiskStatistic>(subject)) {
          return check_axiom(subject.cast<const ComplexRiskStatistic&>(), c, s, BisectionConfig{});
        }
        throw py::type_error("check_axiom: expected a simple, clustering or complex statistic");
      },
      py::arg("subject"), py::arg("axiom"), py::arg("trials") = 10000, py::arg("seed") = 0,
      py::arg("tolerance") = 1e-9);
  m.def(
      "check_level_set_constancy",
      [](const ComplexRiskStatistic& r, std::uint64_t trials, std::uint64_t seed, double tolerance) {
        return check_level_set_constancy(r, spec(trials, seed, tolerance));
      },
      py::arg("rho"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("tolerance") = 1e-9);
  m.def(
      "check_round_trip",
      [](const ComplexRiskStatistic& r, std::uint64_t trials, std::uint64_t seed, double tolerance) {
        return check_round_trip(r, spec(trials, seed, tolerance));
      },
      py::arg("rho"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("tolerance") = 1e-6);
  m.def(
      "check_set_monotonicity",
      [](py::object subject, const std::string& property, std::uint64_t trials, std::uint64_t seed, double tolerance) {
        const SetProperty p = parse_property(property);
        const TrialSpec s = spec(trials, seed, tolerance);
        if (py::isinstance<SimpleRiskStatistic>(subject)) {
          return check_set_monotonicity(subject.cast<const SimpleRiskStatistic&>(), p, s);
        }
        if (py::isinstance<ClusteringFunction>(subject)) {
          return check_set_monotonicity(subject.cast<const ClusteringFunction&>(), p, s);
        }
        throw py::type_error("check_set_monotonicity: expected a simple statistic or clustering function");
      },
      py::arg("subject"), py::arg("property"), py::arg("trials") = 10000, py::arg("seed") = 0,
      py::arg("tolerance") = 1e-9);

  // Acceptance sets and the primal representation.
  m.def("accepts_simple", [](const SimpleRiskStatistic& r, double c, const Vec& x) { return accepts_simple(r, c, cv(x)); });
  m.def("accepts_clustering", [](const ClusteringFunction& c, const Vec& y, const ScenarioVector& x) {
    return accepts_clustering(c, cv(y), x);
  });
  m.def(
      "primal_evaluate",
      [](const ComplexRiskStatistic& r, const ScenarioVector& x, double step, double extent) {
        PrimalGrid g;
        g.step = step;
        g.extent = extent;
        const auto p = primal_evaluate(r, x, g);
        py::dict out;
        out["analytic"] = f(p.analytic);
        out["numeric"] = f(p.numeric);
        out["gap"] = p.gap;
        out["clustering_value"] = p.clustering_value.vector();
        out["numeric_argmin"] = p.numeric_argmin;
        out["points"] = p.points;
        out["warnings"] = p.warnings;
        return out;
      },
      py::arg("rho"), py::arg("x"), py::arg("step") = 0.05, py::arg("extent") = 5.0);

  // Duality.
  m.def(
      "penalty_alpha",
      [](const ComplexRiskStatistic& r, const Vec& yhat, const Vec& shat) {
        const auto a = penalty_alpha(r, DualPair{cv(yhat), cv(shat)});
        py::dict out;
        out["value"] = f(a.value);
        out["simple_part"] = f(a.simple_part);
        out["clustering_part"] = f(a.clustering_part);
        out["unbounded"] = a.unbounded;
        return out;
      },
      py::arg("rho"), py::arg("yhat"), py::arg("xhat_block_sums"));
  m.def(
      "matching_block_sums",
      [](const ClusteringFunction& c, const Vec& yhat, const ScenarioVector& x) {
        return matching_block_sums(c, cv(yhat), x).vector();
      },
      py::arg("clustering"), py::arg("yhat"), py::arg("x"));
  m.def(
      "dual_evaluate",
      [](const ComplexRiskStatistic& r, const ScenarioVector& x, double ymax, double step, bool include_analytic) {
        DualSearch s;
        s.ymax = ymax;
        s.step = step;
        s.include_analytic = include_analytic;
        return dual_dict(dual_evaluate(r, x, s));
      },
      py::arg("rho"), py::arg("x"), py::arg("ymax") = 4.0, py::arg("step") = 0.05, py::arg("include_analytic") = true);
  m.def(
      "weak_duality_check",
      [](const ComplexRiskStatistic& r, const ScenarioVector& x, std::uint64_t trials, std::uint64_t seed,
         double tolerance) { return weak_duality_check(r, x, spec(trials, seed, tolerance)); },
      py::arg("rho"), py::arg("x"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("tolerance") = 1e-9);
  m.def(
      "duality_gap",
      [](const ComplexRiskStatistic& r, const ScenarioVector& x, double ymax, double step, bool include_analytic) {
        DualSearch s;
        s.ymax = ymax;
        s.step = step;
        s.include_analytic = include_analytic;
        const auto g = duality_gap(r, x, s);
        py::dict out;
        out["gap"] = g.gap;
        out["raw"] = g.raw;
        out["primal"] = f(g.primal);
        out["dual"] = dual_dict(g.dual);
        return out;
      },
      py::arg("rho"), py::arg("x"), py::arg("ymax") = 4.0, py::arg("step") = 0.05, py::arg("include_analytic") = true);

  // Config-driven runs; reports come back as JSON text.
  m.def(
      "run_config_json",
      [](const std::string& config, const std::filesystem::path& base_dir, bool timings) {
        const RunConfig c = parse_run_config(config, base_dir);
        const RunReport r = run(c, load_inputs(c));
        return py::make_tuple(report_to_json(r, ReportOptions{timings}), r.exit_code());
      },
      py::arg("config"), py::arg("base_dir") = std::filesystem::path{}, py::arg("timings") = false);
  m.def(
      "normalise_config",
      [](const std::string& config, const std::filesystem::path& base_dir) {
        return config_to_json(parse_run_config(config, base_dir));
      },
      py::arg("config"), py::arg("base_dir") = std::filesystem::path{});
}
