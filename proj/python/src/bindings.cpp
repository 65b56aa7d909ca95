#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relab/errors.hpp"
#include "relab/factorized.hpp"
#include "relab/formsum.hpp"
#include "relab/instance.hpp"
#include "relab/oracles.hpp"
#include "relab/sectorial.hpp"

namespace py = pybind11;
using namespace relab;

namespace {

const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "error";
  }
}

py::tuple outcome(const RunOutcome& r) { return py::make_tuple(status_name(r.status), dump(r.report)); }

}  // namespace

PYBIND11_MODULE(_relab, m) {
  m.doc() = "Linear relations, sectorial extensions and form sums in finite dimension";

  auto error = py::register_exception<Error>(m, "Error");
  auto dimension = py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
  auto precondition = py::register_exception<PreconditionError>(m, "PreconditionError", error);
  py::register_exception<NotSectorial>(m, "NotSectorial", precondition);
  py::register_exception<NotMaximalSectorial>(m, "NotMaximalSectorial", precondition);
  py::register_exception<IllDefinedForm>(m, "IllDefinedForm", precondition);
  py::register_exception<NotFactorizable>(m, "NotFactorizable", precondition);
  py::register_exception<AssumptionNotMet>(m, "AssumptionNotMet", precondition);
  py::register_exception<UnsupportedSide>(m, "UnsupportedSide", precondition);
  py::register_exception<InputError>(m, "InputError", error);
  py::register_exception<InternalInconsistency>(m, "InternalInconsistency", error);
  (void)dimension;

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init([](double rank_rel, double gap_eq) {
             Tolerance t{rank_rel, gap_eq};
             t.validate();
             return t;
           }),
           py::arg("rank_rel") = 1e-10, py::arg("gap_eq") = 1e-9)
      .def_readwrite("rank_rel", &Tolerance::rank_rel)
      .def_readwrite("gap_eq", &Tolerance::gap_eq);

  py::class_<Subspace>(m, "Subspace")
      .def(py::init([](const Matrix& generators, const Tolerance& tol) {
             return Subspace::from_columns(generators, tol, 0.0);
           }),
           py::arg("generators"), py::arg("tol") = Tolerance{}, "Span of the columns of `generators`.")
      .def_static("zero", &Subspace::zero)
      .def_static("full", &Subspace::full)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("basis", &Subspace::basis)
      .def("projector", &Subspace::projector)
      .def("__repr__", [](const Subspace& s) {
        return "<Subspace dim " + std::to_string(s.dim()) + " in C^" + std::to_string(s.ambient_dim()) + ">";
      });

  py::class_<Relation>(m, "Relation")
      .def(py::init([](Index p, Index q, const std::vector<std::pair<Vector, Vector>>& pairs, const Tolerance& tol) {
             return make_relation(p, q, pairs, tol);
           }),
           py::arg("dim_from"), py::arg("dim_to"), py::arg("pairs"), py::arg("tol") = Tolerance{},
           "Relation spanned by pairs (f, f').")
      .def_static("from_matrix", &Relation::from_matrix)
      .def_static("identity", &Relation::identity)
      .def_static("zero_graph", &Relation::zero_graph)
      .def_property_readonly("dim_from", &Relation::dim_from)
      .def_property_readonly("dim_to", &Relation::dim_to)
      .def_property_readonly("graph", &Relation::graph)
      .def("to_json", [](const Relation& r) { return dump(relation_to_json(r)); })
      .def("fingerprint", [](const Relation& r) { return fingerprint(r); })
      .def("__repr__", [](const Relation& r) {
        return "<Relation C^" + std::to_string(r.dim_from()) + " -> C^" + std::to_string(r.dim_to()) + ", graph dim " +
               std::to_string(r.graph().dim()) + ">";
      });

  const py::arg_v tol("tol", Tolerance{});

  m.def("domain", &domain, py::arg("r"), tol);
  m.def("range", &range, py::arg("r"), tol);
  m.def("kernel", &kernel, py::arg("r"), tol);
  m.def("multivalued_part", &multivalued_part, py::arg("r"), tol);
  m.def("adjoint", &adjoint);
  m.def("inverse", &inverse);
  m.def("compose", &compose, py::arg("r2"), py::arg("r1"), tol);
  m.def("operator_sum", &operator_sum, py::arg("r1"), py::arg("r2"), tol);
  m.def("operator_part", &operator_part, py::arg("r"), tol);
  m.def("restrict", &restrict, py::arg("r"), py::arg("l"), tol);
  m.def("gap", py::overload_cast<const Relation&, const Relation&>(&gap));
  m.def("gap", py::overload_cast<const Subspace&, const Subspace&>(&gap));
  m.def("apply", &relab::apply, py::arg("r"), py::arg("f"), tol);

  m.def(
      "sectoriality",
      [](const Relation& r, const Tolerance& t) {
        const SectorReport s = sectoriality(r, t);
        py::dict d;
        d["is_sectorial"] = s.is_sectorial;
        d["tan_min"] = s.tan_min;
        d["is_maximal"] = s.is_maximal;
        return d;
      },
      py::arg("r"), tol);
  m.def("sqrt_nonneg", &sqrt_nonneg, py::arg("a"), tol);
  m.def(
      "decompose",
      [](const Relation& h, const Tolerance& t) {
        const MaxSectorialDecomposition d = decompose_maximal(h, t);
        return py::make_tuple(d.real_part, d.sqrt_real, d.b);
      },
      py::arg("h"), tol, "Returns (H_r, H_r^{1/2}, B).");

  m.def("friedrichs_oracle", &friedrichs_oracle, py::arg("s"), tol);
  m.def("krein_oracle", &krein_oracle, py::arg("s"), tol);
  m.def(
      "extremal_oracle",
      [](const Relation& h, const Relation& s, const Tolerance& t) {
        const ExtensionVerdict v = extremal_oracle(h, s, t);
        py::dict d;
        d["extends"] = v.extends;
        d["maximal"] = v.maximal;
        d["extremal"] = v.extremal;
        d["witness_gap"] = v.witness_gap;
        return d;
      },
      py::arg("h"), py::arg("s"), tol);
  m.def("extension_family", &extension_family_general, py::arg("s"), py::arg("l"), tol);

  py::enum_<Side>(m, "Side").value("left", Side::left).value("right", Side::right);
  py::enum_<RecoveryMode>(m, "RecoveryMode")
      .value("friedrichs", RecoveryMode::friedrichs)
      .value("krein", RecoveryMode::krein);

  py::class_<FactorizedSectorial>(m, "FactorizedSectorial")
      .def_readonly("t", &FactorizedSectorial::t)
      .def_readonly("b", &FactorizedSectorial::b)
      .def_readonly("side", &FactorizedSectorial::side)
      .def_readonly("s", &FactorizedSectorial::s);

  m.def("factorize", &factorize_product, py::arg("t"), py::arg("b"), py::arg("side") = Side::left, tol);
  m.def("friedrichs_factorized", &friedrichs_factorized, py::arg("f"), tol);
  m.def("krein_factorized", &krein_factorized, py::arg("f"), tol);
  m.def("extremal_factorized", &extremal_factorized, py::arg("f"), py::arg("l"), tol);
  m.def("recover", &recover_factorization, py::arg("s"), py::arg("mode"), tol);

  py::class_<SumAssembly>(m, "SumAssembly")
      .def_readonly("h1", &SumAssembly::h1)
      .def_readonly("h2", &SumAssembly::h2)
      .def_readonly("phi", &SumAssembly::phi)
      .def_readonly("psi", &SumAssembly::psi)
      .def_readonly("ksum", &SumAssembly::ksum)
      .def_readonly("e", &SumAssembly::e)
      .def_readonly("f", &SumAssembly::f)
      .def_readonly("d", &SumAssembly::d)
      .def_readonly("sum", &SumAssembly::sum)
      .def_readonly("b_oplus", &SumAssembly::b_oplus);

  m.def("assemble", &assemble, py::arg("h1"), py::arg("h2"), tol);
  m.def("friedrichs_sum", &friedrichs_sum, py::arg("sa"), tol);
  m.def(
      "krein_sum", [](const SumAssembly& sa, const Tolerance& t) { return krein_sum(sa, t).relation; }, py::arg("sa"),
      tol);
  m.def("formsum", &formsum_extension, py::arg("sa"), tol);
  m.def(
      "extremality_report",
      [](const SumAssembly& sa, const Tolerance& t) {
        const ExtremalityReport r = extremality_report(sa, t);
        py::dict d;
        d["e_eq_f"] = r.e_eq_f;
        d["e_eq_d"] = r.e_eq_d;
        d["formsum_extremal"] = r.formsum_extremal;
        d["equivalence_holds"] = r.equivalence_holds;
        d["e_eq_f_forced"] = r.e_eq_f_forced;
        return d;
      },
      py::arg("sa"), tol);

  // Reports cross the boundary as (status, JSON text); the package wrapper decodes them.
  m.def("_run_text", [](const std::string& text, const std::string& source) {
    RunOutcome r;
    {
      py::gil_scoped_release release;
      r = run_text(text, source);
    }
    return outcome(r);
  });
  m.def("_gen_random", [](std::uint64_t seed, Index n, const std::string& profile) {
    return dump(serialize_instance(gen_random(seed, n, profile)));
  });
  m.def("profiles", &profiles);
}
