#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "naimark_lab/compatibility.hpp"
#include "naimark_lab/dichotomic.hpp"
#include "naimark_lab/document.hpp"
#include "naimark_lab/examples.hpp"
#include "naimark_lab/naimark.hpp"

namespace py = pybind11;
using namespace naimark_lab;

namespace {

std::array<double, 3> axis_arg(const py::object& axis) {
  if (py::isinstance<py::str>(axis)) {
    const std::string label = axis.cast<std::string>();
    if (label.size() != 1) throw std::invalid_argument("axis label must be one of 'x', 'y', 'z'");
    return axis_from_label(label[0]);
  }
  return axis.cast<std::array<double, 3>>();
}

}  // namespace

PYBIND11_MODULE(_naimark_lab, m) {
  m.doc() = "Naimark extensions and joint-measurability checks for finite-outcome POVMs.";

  py::class_<Povm>(m, "Povm")
      .def(py::init([](std::vector<ComplexMatrix> effects, double tol) {
             if (effects.empty()) throw std::invalid_argument("a POVM needs at least one effect");
             const int dim = static_cast<int>(effects.front().rows());
             return Povm::validate(std::move(effects), dim, tol);
           }),
           py::arg("effects"), py::arg("tol") = kDefaultTol)
      .def_property_readonly("dim", &Povm::dim)
      .def_property_readonly("effects", &Povm::effects)
      .def("__len__", &Povm::size)
      .def("__getitem__", [](const Povm& p, int i) {
        if (i < 0 || i >= p.size()) throw py::index_error();
        return p[i];
      });

  py::class_<JointPovm>(m, "JointPovm")
      .def(py::init([](std::vector<ComplexMatrix> cells, std::vector<int> shape, double tol) {
             if (cells.empty()) throw std::invalid_argument("a joint POVM needs at least one cell");
             const int dim = static_cast<int>(cells.front().rows());
             return JointPovm::validate(std::move(cells), std::move(shape), dim, tol);
           }),
           py::arg("cells"), py::arg("shape"), py::arg("tol") = kDefaultTol)
      .def_property_readonly("dim", &JointPovm::dim)
      .def_property_readonly("shape", &JointPovm::shape)
      .def_property_readonly("cells", &JointPovm::cells)
      .def("marginal", [](const JointPovm& j, int axis) { return marginal(j, axis); }, py::arg("axis"));

  m.def("unsharp_spin", [](const py::object& axis, double lambda) { return unsharp_spin(UnsharpSpin(axis_arg(axis), lambda)); },
        py::arg("axis"), py::arg("lam"));

  m.def("unsharp_trio_joint", [](double lambda) {
    const TrioJoint t = unsharp_trio_joint(lambda);
    py::dict d;
    d["valid"] = t.valid;
    d["min_eigenvalue"] = t.min_eigenvalue();
    d["cells"] = t.cells;
    return d;
  }, py::arg("lam"));

  py::class_<NaimarkExtension>(m, "NaimarkExtension")
      .def_property_readonly("sys_dim", &NaimarkExtension::sys_dim)
      .def_property_readonly("anc_dim", &NaimarkExtension::anc_dim)
      .def_property_readonly("ancilla_state", &NaimarkExtension::ancilla_state)
      .def_property_readonly("projectors", [](const NaimarkExtension& e) { return e.pvm().effects(); })
      .def("induced_effects", &NaimarkExtension::induced_effects);

  py::class_<ExtensionCheck>(m, "ExtensionCheck")
      .def_readonly("deltas", &ExtensionCheck::deltas)
      .def_readonly("max_delta", &ExtensionCheck::max_delta)
      .def_readonly("passed", &ExtensionCheck::passed);

  m.def("general_extension",
        [](const Povm& p, const std::vector<ComplexMatrix>& unitaries) { return general_extension(p, unitaries); },
        py::arg("povm"), py::arg("unitaries") = std::vector<ComplexMatrix>{});
  m.def("dichotomic_extension", [](const Povm& p, const ComplexMatrix& u) { return dichotomic_extension(p, u); },
        py::arg("povm"), py::arg("u"));
  m.def("verify_extension", [](const NaimarkExtension& e, const Povm& p, double tol) { return verify_extension(e, p, tol); },
        py::arg("extension"), py::arg("povm"), py::arg("tol") = kDefaultTol);
  m.def("minimal_ancilla_dim", [](const Povm& p) { return minimal_ancilla_dim(p).dim; }, py::arg("povm"));

  m.def("common_extension_joint", [](const std::vector<NaimarkExtension>& exts, double tol) {
    const CompatReport r = joint_povm_from_common_extension(exts, tol);
    py::dict d;
    d["verdict"] = to_string(r.verdict);
    d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
    d["max_commutator"] = r.commutation.max_norm;
    d["max_marginal_delta"] = r.max_marginal_delta;
    d["note"] = r.note;
    return d;
  }, py::arg("extensions"), py::arg("tol") = kDefaultTol);

  py::class_<FeasibilityResult>(m, "FeasibilityResult")
      .def_property_readonly("status", [](const FeasibilityResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("feasible", &FeasibilityResult::feasible)
      .def_readonly("iterations", &FeasibilityResult::iterations)
      .def_readonly("residual", &FeasibilityResult::residual)
      .def_readonly("joint", &FeasibilityResult::joint);

  m.def("feasibility_oracle", [](const std::vector<Povm>& povms, int max_iter, double tol) {
    FeasibilityOptions o;
    o.max_iter = max_iter;
    o.tol = tol;
    py::gil_scoped_release release;
    return feasibility_oracle(povms, o);
  }, py::arg("povms"), py::arg("max_iter") = FeasibilityOptions{}.max_iter, py::arg("tol") = FeasibilityOptions{}.tol);

  py::class_<IncompatibilityEstimate>(m, "IncompatibilityEstimate")
      .def_readonly("value", &IncompatibilityEstimate::value)
      .def_readonly("converged", &IncompatibilityEstimate::converged)
      .def_readonly("restart_values", &IncompatibilityEstimate::restart_values)
      .def_readonly("evaluations", &IncompatibilityEstimate::evaluations)
      .def_readonly("anc_dim", &IncompatibilityEstimate::anc_dim);

  m.def("incompatibility_estimate",
        [](const std::vector<Povm>& povms, int restarts, int budget, std::uint64_t seed, double tol, int anc_dim) {
          EstimatorOptions o{restarts, budget, seed, tol, anc_dim};
          py::gil_scoped_release release;
          return incompatibility_estimate(povms, o);
        },
        py::arg("povms"), py::arg("restarts") = 8, py::arg("budget") = 5000, py::arg("seed") = 0,
        py::arg("tol") = 1e-6, py::arg("anc_dim") = 0);

  m.def("w_residual", [](const Povm& a, const Povm& b, const ComplexMatrix& w) {
    return w_residual(DichotomicPair::make(a, b), w);
  }, py::arg("a"), py::arg("b"), py::arg("w"));

  m.def("find_w", [](const Povm& a, const Povm& b, int restarts, int budget, double tol, std::uint64_t seed) -> py::object {
    FindWOptions o;
    o.restarts = restarts;
    o.budget = budget;
    o.tol = tol;
    o.seed = seed;
    const auto found = find_w(DichotomicPair::make(a, b), o);
    if (!found) return py::none();
    return py::make_tuple(found->w, found->residual);
  }, py::arg("a"), py::arg("b"), py::arg("restarts") = 8, py::arg("budget") = 5000, py::arg("tol") = 1e-6,
        py::arg("seed") = 0);

  m.def("joint_from_w", [](const Povm& a, const Povm& b, const ComplexMatrix& w, double tol) {
    return joint_from_w(DichotomicPair::make(a, b), w, tol);
  }, py::arg("a"), py::arg("b"), py::arg("w"), py::arg("tol") = 1e-6);

  m.def("xy_closed_form_theta", &xy_closed_form_theta, py::arg("lambda1"), py::arg("lambda2"));

  m.def("region_scan", [](const py::object& axis1, const py::object& axis2, int grid, std::uint64_t seed, int threads) {
    RegionOptions o;
    o.search.seed = seed;
    o.threads = threads;
    const auto a1 = axis_arg(axis1), a2 = axis_arg(axis2);
    std::vector<RegionRow> rows;
    {
      py::gil_scoped_release release;
      rows = region_scan(a1, a2, square_grid(grid), o);
    }
    py::list out;
    for (const auto& r : rows) {
      py::dict d;
      d["lambda1"] = r.lambda1;
      d["lambda2"] = r.lambda2;
      d["w_search"] = to_string(r.w_search);
      d["oracle"] = to_string(r.oracle);
      d["closed_form"] = to_string(r.closed_form);
      d["residual"] = r.residual;
      d["theta"] = r.theta;
      out.append(d);
    }
    return out;
  }, py::arg("axis1"), py::arg("axis2"), py::arg("grid") = 11, py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("run_examples", [](int which) {
    py::list out;
    for (const auto& c : which == 0 ? run_all_examples() : run_example(which)) {
      py::dict d;
      d["example"] = c.example;
      d["name"] = c.name;
      d["passed"] = c.passed;
      d["detail"] = c.detail;
      out.append(d);
    }
    return out;
  }, py::arg("which") = 0);
}
