#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reach/config.hpp"
#include "reach/experiment.hpp"
#include "reach/metrics.hpp"
#include "reach/refine.hpp"

namespace py = pybind11;
using namespace reach;

namespace {

py::array_t<double> set_points(const LatticeSet& set) {
  py::array_t<double> out({set.size(), set.dimension()});
  auto view = out.mutable_unchecked<2>();
  const double rho = set.resolution();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto z = set.index(i);
    for (std::size_t a = 0; a < set.dimension(); ++a) view(i, a) = rho * static_cast<double>(z[a]);
  }
  return out;
}

EulerOptions make_options(std::uint64_t cap, unsigned workers, bool keep_sets) {
  EulerOptions options;
  options.cardinality_cap = cap;
  options.workers = workers;
  options.keep_sets = keep_sets;
  return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grid-based reachable sets of differential inclusions";

  static py::handle resource_error =
      py::exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ResourceError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(resource_error)(e.what());
      exc.attr("step") = e.step();
      exc.attr("projected_cost") = e.projected_cost();
      PyErr_SetObject(resource_error.ptr(), exc.ptr());
    }
  });

  py::class_<Box>(m, "Box")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lower"), py::arg("upper"))
      .def_readonly("lower", &Box::lower)
      .def_readonly("upper", &Box::upper)
      .def("__repr__", [](const Box& b) {
        return "Box(" + py::repr(py::cast(b.lower)).cast<std::string>() + ", " +
               py::repr(py::cast(b.upper)).cast<std::string>() + ")";
      });

  py::class_<SystemSpec>(m, "System")
      .def_property_readonly("name", &SystemSpec::name)
      .def_property_readonly("dimension", &SystemSpec::dimension)
      .def_property_readonly("horizon", &SystemSpec::horizon)
      .def_property_readonly("lipschitz", &SystemSpec::lipschitz)
      .def_property_readonly("bound", &SystemSpec::bound)
      .def_property_readonly("d_R", &SystemSpec::d_R)
      .def_property_readonly("d_F", &SystemSpec::d_F)
      .def_property_readonly("initial_set", &SystemSpec::initial_set)
      .def("rhs", [](const SystemSpec& s, std::vector<double> x) { return s.evaluate_rhs(x); })
      .def("exact_reachable_box",
           [](const SystemSpec& s, double t) { return exact_reachable_box(s, t); });
  m.def("exponential_system", [](std::size_t d, double L) { return make_exponential_system(d, L); },
        py::arg("d"), py::arg("L"));
  m.def("michaelis_menten", &make_michaelis_menten);

  py::class_<Discretization>(m, "Discretization")
      .def_static("initial", &Discretization::initial, py::arg("T"), py::arg("L"), py::arg("P"))
      .def_static("uniform", &Discretization::uniform, py::arg("T"), py::arg("n"))
      .def_property_readonly("n", &Discretization::n)
      .def_property_readonly("horizon", &Discretization::horizon)
      .def_property_readonly("steps",
                             [](const Discretization& d) {
                               std::vector<double> h;
                               for (std::size_t j = 1; j <= d.n(); ++j) h.push_back(d.step(j));
                               return h;
                             })
      .def_property_readonly("nodes",
                             [](const Discretization& d) {
                               std::vector<double> t;
                               for (std::size_t j = 0; j <= d.n(); ++j) t.push_back(d.node(j));
                               return t;
                             })
      .def_property_readonly("resolutions",
                             [](const Discretization& d) {
                               std::vector<double> rho;
                               for (std::size_t j = 0; j <= d.n(); ++j) rho.push_back(d.resolution(j));
                               return rho;
                             })
      .def("subdivide", &Discretization::subdivide, py::arg("j"))
      .def(py::self == py::self);

  m.def("error_total", &error_total, py::arg("disc"), py::arg("L"), py::arg("P"));
  m.def("error_components", &error_components, py::arg("disc"), py::arg("L"), py::arg("P"));
  m.def("delta_error", &delta_error, py::arg("disc"), py::arg("L"), py::arg("P"), py::arg("k"));
  m.def("uniform_step_count", &uniform_step_count, py::arg("eps"), py::arg("L"), py::arg("P"),
        py::arg("T"));
  m.def("default_ladder", &default_ladder, py::arg("system"), py::arg("eps"));

  m.def("project_box", [](const Box& b, double rho) { return set_points(project_box(b, rho)); },
        py::arg("box"), py::arg("rho"));

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("disc", &RunRecord::disc)
      .def_readonly("set_sizes", &RunRecord::set_sizes)
      .def_readonly("cost_exact", &RunRecord::cost_exact)
      .def_readonly("error_bound", &RunRecord::error_bound)
      .def_property_readonly("total_cost", &RunRecord::total_cost)
      .def_property_readonly("set_count", [](const RunRecord& r) { return r.sets.size(); })
      .def("set_points", [](const RunRecord& r, std::size_t k) { return set_points(r.sets.at(k)); },
           py::arg("k"))
      .def("distance_to_exact", [](const RunRecord& r, const SystemSpec& s, std::size_t k) {
        return hausdorff_to_box(r.sets.at(k), exact_reachable_box(s, r.disc.node(k)));
      });

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("m", &IterationRecord::m)
      .def_readonly("chosen", &IterationRecord::chosen)
      .def_readonly("n_after", &IterationRecord::n_after)
      .def_readonly("delta_error", &IterationRecord::delta_error)
      .def_readonly("delta_cost", &IterationRecord::delta_cost)
      .def_readonly("ratio", &IterationRecord::ratio)
      .def_readonly("error_after", &IterationRecord::error_after);

  py::class_<ThresholdRecord>(m, "ThresholdRecord")
      .def_readonly("level", &ThresholdRecord::level)
      .def_readonly("threshold", &ThresholdRecord::threshold)
      .def_readonly("error_bound", &ThresholdRecord::error_bound)
      .def_readonly("n", &ThresholdRecord::n)
      .def_readonly("cost_final", &ThresholdRecord::cost_final)
      .def_readonly("cost_cumulative", &ThresholdRecord::cost_cumulative)
      .def_readonly("delta_cost_error", &ThresholdRecord::delta_cost_error);

  py::class_<UniformResult>(m, "UniformResult")
      .def_readonly("disc", &UniformResult::disc)
      .def_readonly("record", &UniformResult::record);

  py::class_<AdaptiveResult>(m, "AdaptiveResult")
      .def_readonly("disc", &AdaptiveResult::disc)
      .def_readonly("record", &AdaptiveResult::record)
      .def_property_readonly("iterations", [](const AdaptiveResult& a) { return a.trace.iterations; })
      .def_property_readonly("thresholds", [](const AdaptiveResult& a) { return a.trace.thresholds; });

  m.def("run_uniform",
        [](const SystemSpec& s, double eps, std::uint64_t cap, unsigned workers, bool keep_sets) {
          py::gil_scoped_release release;
          return algorithm_uniform(s, eps, make_options(cap, workers, keep_sets));
        },
        py::arg("system"), py::arg("eps"), py::arg("cap") = 50'000'000, py::arg("workers") = 1,
        py::arg("keep_sets") = true);
  m.def("run_adaptive",
        [](const SystemSpec& s, std::vector<double> ladder, std::uint64_t cap, unsigned workers,
           bool keep_sets) {
          py::gil_scoped_release release;
          return algorithm_adaptive(s, ladder, make_options(cap, workers, keep_sets));
        },
        py::arg("system"), py::arg("ladder"), py::arg("cap") = 50'000'000, py::arg("workers") = 1,
        py::arg("keep_sets") = true);

  m.def("sigma_curves", [](const RunRecord& r, const SystemSpec& s) {
    const SigmaCurves c = metric_sigma(r, s.lipschitz(), s.bound());
    return py::make_tuple(c.error, c.cost);
  }, py::arg("record"), py::arg("system"));

  m.def("config_hash", [](const std::string& text) {
    ExperimentConfig config = parse_config_text(text, {});
    validate(config);
    return config_hash(config);
  });
}
