#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qclone/cloner.hpp"
#include "qclone/errors.hpp"
#include "qclone/report.hpp"
#include "qclone/strategies.hpp"

namespace py = pybind11;
using namespace qclone;

namespace {

FamilyVariant variant_of(const std::string& v) { return parse_variant(v); }

unsigned n_or_default(FamilyVariant v, std::optional<unsigned> n) { return n.value_or(base_bits(v)); }

CloneSpec spec_from_rows(const std::vector<std::vector<Complex>>& states) {
  std::vector<StateVector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.emplace_back(s);
  return make_clone_spec(std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Probabilistic cloning of phase-oracle states";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<MeasurementError>(m, "MeasurementError", PyExc_RuntimeError);
  py::register_exception<GaugeError>(m, "GaugeError", PyExc_RuntimeError);

  py::class_<BoolFunc>(m, "BoolFunc")
      .def(py::init<unsigned>(), py::arg("n"))
      .def_static("from_bits", &BoolFunc::from_bits, py::arg("bits"))
      .def_static("from_hex", &BoolFunc::from_hex, py::arg("n"), py::arg("hex"))
      .def_property_readonly("n", &BoolFunc::n)
      .def("__len__", &BoolFunc::size)
      .def("__getitem__", &BoolFunc::at)
      .def("complement", &BoolFunc::complement)
      .def("weight", &BoolFunc::weight)
      .def("hamming", &BoolFunc::hamming)
      .def("to_bits", &BoolFunc::to_bits)
      .def("to_hex", &BoolFunc::to_hex)
      .def("to_json", [](const BoolFunc& f) { return to_json(f).dump(); })
      .def("__xor__", [](const BoolFunc& f, const BoolFunc& g) { return f ^ g; })
      .def("__eq__", [](const BoolFunc& f, const BoolFunc& g) { return f == g; })
      .def("__lt__", [](const BoolFunc& f, const BoolFunc& g) { return f < g; })
      .def("__hash__", [](const BoolFunc& f) { return BoolFuncHash{}(f); })
      .def("__repr__", [](const BoolFunc& f) { return "BoolFunc('" + f.to_bits() + "')"; });

  m.def("overlap", [](const BoolFunc& f, const BoolFunc& g) { return inner(phase_state(f), phase_state(g)); },
        py::arg("f"), py::arg("g"));

  m.def("family_json",
        [](const std::string& v, std::optional<unsigned> n) {
          const auto fv = variant_of(v);
          return to_json(build_family(fv, n_or_default(fv, n))).dump();
        },
        py::arg("variant"), py::arg("n") = py::none());

  m.def("h_set_of",
        [](const std::string& v, const BoolFunc& g) -> std::optional<std::size_t> {
          return h_set_of(build_family(variant_of(v), g.n()), g);
        },
        py::arg("variant"), py::arg("g"));

  m.def("efficiency_report_json",
        [](const std::string& v, std::optional<unsigned> n) {
          const auto fv = variant_of(v);
          return efficiency_report(build_family(fv, n_or_default(fv, n))).dump();
        },
        py::arg("variant"), py::arg("n") = py::none());

  m.def("max_efficiencies",
        [](const std::vector<std::vector<Complex>>& states, const std::string& objective) {
          EfficiencyOptions o;
          if (objective == "average") {
            o.objective = Objective::kAverage;
          } else if (objective != "lexicographic") {
            throw ValidationError("objective must be 'lexicographic' or 'average'");
          }
          py::gil_scoped_release release;
          return max_efficiencies(spec_from_rows(states), o);
        },
        py::arg("states"), py::arg("objective") = "lexicographic");

  m.def("residual_min_eigenvalue",
        [](const std::vector<std::vector<Complex>>& states, const std::vector<double>& gammas) {
          auto spec = spec_from_rows(states);
          spec = make_clone_spec(gauge_normalize(spec.states));
          return residual_min_eigenvalue(spec, gammas);
        },
        py::arg("states"), py::arg("gammas"));

  m.def("analytic_json",
        [](const std::string& v, std::optional<unsigned> n) {
          const auto fv = variant_of(v);
          const auto b = build_family(fv, n_or_default(fv, n));
          return to_json(analytic_scores(b, clone_spec_for_family(b).gammas)).dump();
        },
        py::arg("variant"), py::arg("n") = py::none());

  m.def("simulate_json",
        [](const std::string& v, std::optional<unsigned> n, std::uint64_t trials, std::uint64_t seed,
           unsigned threads, bool distinct_f12, bool physical_wrong_branch) {
          ExperimentConfig c;
          c.variant = variant_of(v);
          c.n = n_or_default(c.variant, n);
          c.trials = trials;
          c.seed = seed;
          c.threads = threads;
          c.distinct_f12 = distinct_f12;
          c.physical_wrong_branch = physical_wrong_branch;
          py::gil_scoped_release release;
          return to_json(run_experiment(c)).dump();
        },
        py::arg("variant"), py::arg("n") = py::none(), py::arg("trials") = 100'000,
        py::arg("seed") = 7, py::arg("threads") = 1, py::arg("distinct_f12") = false,
        py::arg("physical_wrong_branch") = false);
}
