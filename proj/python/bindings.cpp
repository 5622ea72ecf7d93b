#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bell/classical.hpp"
#include "bell/document.hpp"
#include "bell/generators.hpp"
#include "bell/seesaw.hpp"
#include "bell/violation.hpp"

namespace py = pybind11;
using namespace bell;

namespace {

using Tensor = py::array_t<double, py::array::c_style | py::array::forcecast>;

Scenario scenario_of(const Tensor& a) {
  if (a.ndim() != 4) throw std::invalid_argument("expected a 4-d array indexed [x][y][a][b]");
  return {static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)),
          static_cast<int>(a.shape(3))};
}

std::vector<double> values_of(const Tensor& a) { return {a.data(), a.data() + a.size()}; }

BellFunctional functional(const Tensor& a) { return {scenario_of(a), values_of(a)}; }

Behavior behavior(const Tensor& a, bool complete) {
  return {scenario_of(a), values_of(a), complete ? Completeness::complete : Completeness::incomplete};
}

Tensor to_array(const Scenario& s, std::span<const double> v) {
  Tensor out({s.inputs_a, s.inputs_b, s.outputs_a, s.outputs_b});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Tensor to_array(const BellFunctional& t) { return to_array(t.scenario(), t.coeffs()); }
Tensor to_array(const Behavior& p) { return to_array(p.scenario(), p.probs()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bell-scenario analysis: classical values, see-saw search and behavior LPs.";

  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);
  py::register_exception<UndefinedQuantity>(m, "UndefinedQuantity", PyExc_ArithmeticError);

  m.def("chsh", [] { return to_array(chsh()); });
  m.def("magic_square", [] { return to_array(magic_square()); });
  m.def("random_functional", [](int na, int nb, int ma, int mb, std::uint64_t seed) {
    return to_array(random_functional(Scenario(na, nb, ma, mb), seed));
  }, py::arg("na"), py::arg("nb"), py::arg("ma"), py::arg("mb"), py::arg("seed"));

  m.def("classical_value", [](const Tensor& t) { return classical_value(functional(t), Limits::from_env()); });
  m.def("classical_value_incomplete",
        [](const Tensor& t) { return classical_value_incomplete(functional(t), Limits::from_env()); });
  m.def("banach_norm", [](const Tensor& t) { return banach_norm(functional(t), Limits::from_env()); });

  m.def("seesaw", [](const Tensor& t, int dim, int seeds, std::uint64_t rng_seed, bool incomplete) {
    SeesawConfig cfg;
    cfg.dim = dim;
    cfg.seeds = seeds;
    cfg.rng_seed = rng_seed;
    cfg.mode = incomplete ? Completeness::incomplete : Completeness::complete;
    SeesawResult r;
    {
      py::gil_scoped_release release;
      r = seesaw(functional(t), cfg);
    }
    py::dict out;
    out["value"] = r.value;
    out["converged"] = r.converged;
    out["sweeps_used"] = r.sweeps_used;
    out["per_seed_values"] = r.per_seed_values;
    out["behavior"] = to_array(behavior_from_quantum(r.model));
    return out;
  }, py::arg("functional"), py::arg("dim"), py::arg("seeds") = 20, py::arg("rng_seed") = 0,
     py::arg("incomplete") = false);

  m.def("max_violation", [](const Tensor& p) {
    const MaxViolation mv = max_violation(behavior(p, true), Limits::from_env());
    return py::make_tuple(mv.nu, to_array(mv.witness), mv.boundary);
  }, py::arg("behavior"), "Returns (nu, witness, boundary).");
  m.def("noise_robustness", [](const Tensor& p) { return noise_robustness(behavior(p, true), Limits::from_env()); });
  m.def("comm_lower_bound", [](const Tensor& p) { return comm_lower_bound(behavior(p, true), Limits::from_env()); });
  m.def("complete_behavior", [](const Tensor& p) { return to_array(complete_behavior(behavior(p, false))); });
  m.def("is_local", [](const Tensor& p) {
    const MembershipCertificate c = is_local(behavior(p, true), Limits::from_env());
    py::dict out;
    out["verdict"] = to_string(c.verdict);
    out["reconstruction_error"] = c.reconstruction_error;
    py::list model;
    for (const auto& term : c.model.terms) model.append(py::make_tuple(term.weight, term.strategy.alice, term.strategy.bob));
    out["model"] = model;
    if (c.verdict == Verdict::local || c.separator.coeffs().empty()) {
      out["separator"] = py::none();
    } else {
      out["separator"] = to_array(c.separator);
    }
    out["separator_value"] = c.separator_value;
    out["max_vertex_value"] = c.max_vertex_value;
    out["warnings"] = c.warnings;
    return out;
  });

  m.def("functional_document", [](const Tensor& t, const std::string& name) {
    return serialize(to_document(functional(t), {name, "bellkit"}));
  }, py::arg("functional"), py::arg("name") = "");
  m.def("functional_from_json", [](const std::string& text) {
    return to_array(functional_from_document(parse_json(text)));
  });
}
