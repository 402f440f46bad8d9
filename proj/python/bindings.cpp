#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcsp/containment.hpp"
#include "qcsp/entailment.hpp"
#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/hom.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/qcore.hpp"
#include "qcsp/structure_io.hpp"

namespace py = pybind11;
using namespace qcsp;

namespace {

py::dict verdict_dict(const ContainmentVerdict& v) {
  py::dict d;
  d["outcome"] = to_string(v.outcome);
  d["exponent"] = v.exponent;
  d["bound"] = v.bound;
  d["bound_kind"] = to_string(v.bound_kind);
  d["cap"] = v.cap;
  if (v.witness) {
    d["witness"] = v.witness->mapping;
  } else {
    d["witness"] = py::none();
  }
  d["diagnostics"] = v.diagnostics;
  return d;
}

ContainmentOptions make_options(std::optional<std::int64_t> cap, std::int64_t max_elements) {
  ContainmentOptions o;
  o.cap = cap;
  o.limits.max_elements = max_elements;
  return o;
}

}  // namespace

PYBIND11_MODULE(_qcsp, m) {
  m.doc() = "Quantified constraint satisfaction: containment, entailment, Q-cores";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SignatureError>(m, "SignatureError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

  py::class_<Structure>(m, "Structure")
      .def_static("from_json", &parse_structure, py::arg("text"))
      .def_static("load", &read_structure_file, py::arg("path"))
      .def("to_json", &format_structure)
      .def_property_readonly("size", &Structure::size)
      .def_property_readonly("name", &Structure::name)
      .def_property_readonly("labels", [](const Structure& s) {
        std::vector<std::string> out;
        for (int i = 0; i < s.size(); ++i) out.push_back(s.label(i));
        return out;
      })
      .def_property_readonly("constants", &Structure::constants)
      .def_property_readonly("tuple_count", &Structure::tuple_count)
      .def("same_as", &Structure::same_as)
      .def("__len__", &Structure::size)
      .def("__repr__", [](const Structure& s) {
        return "<Structure " + (s.name().empty() ? std::string("?") : s.name()) + " |" +
               std::to_string(s.size()) + "|>";
      });

  py::class_<PhSentence>(m, "Sentence")
      .def_static("parse", &parse_sentence, py::arg("text"))
      .def("__str__", [](const PhSentence& s) { return to_string(s); })
      .def("__repr__", [](const PhSentence& s) { return "<Sentence " + to_string(s) + ">"; })
      .def_property_readonly("variable_count", &PhSentence::variable_count);

  m.def("generate", &generate, py::arg("family"),
        py::arg("params") = std::map<std::string, std::string>{});
  m.def("generator_families", &generator_families);
  m.def("product", [](const Structure& a, const Structure& b) { return product(a, b); });
  m.def("power", [](const Structure& a, int r) { return power(a, r); });
  m.def("expansion", &expansion);
  m.def("superprodukt", [](const Structure& a, int k) { return superprodukt(a, k); });
  m.def("sentence_to_structure",
        [](const PhSentence& s) { return sentence_to_structure(s); });
  m.def("structure_to_sentence", &structure_to_sentence);

  m.def("evaluate", [](const Structure& a, const PhSentence& s) {
    return evaluate(a, s).value;
  });
  m.def("find_hom", [](const Structure& a, const Structure& b)
            -> std::optional<std::vector<int>> {
    auto w = find_hom(a, b);
    if (!w) return std::nullopt;
    return w->mapping;
  });
  m.def("find_surjective_hom",
        [](const Structure& a, const Structure& b, bool respect_constants)
            -> std::optional<std::vector<int>> {
          auto w = find_surjective_hom(a, b, respect_constants);
          if (!w) return std::nullopt;
          return w->mapping;
        },
        py::arg("a"), py::arg("b"), py::arg("respect_constants") = false);
  m.def("is_homomorphism", &is_homomorphism, py::arg("a"), py::arg("b"),
        py::arg("mapping"), py::arg("respect_constants") = false);
  m.def("orbit_count", [](const Structure& a, int n) { return orbit_count(a, n); });
  m.def("find_majority_polymorphism",
        [](const Structure& a) { return find_majority_polymorphism(a); });

  m.def("decide_containment",
        [](const Structure& a, const Structure& b, std::optional<std::int64_t> cap,
           std::int64_t max_elements) {
          return verdict_dict(decide_containment(a, b, make_options(cap, max_elements)));
        },
        py::arg("a"), py::arg("b"), py::arg("cap") = py::none(),
        py::arg("max_elements") = 1'000'000);
  m.def("equivalent",
        [](const Structure& a, const Structure& b, std::optional<std::int64_t> cap)
            -> std::optional<bool> {
          auto r = equivalent(a, b, make_options(cap, 1'000'000));
          if (r.value == Tribool::kUnknown) return std::nullopt;
          return r.value == Tribool::kTrue;
        },
        py::arg("a"), py::arg("b"), py::arg("cap") = py::none());

  m.def("decide_entailment",
        [](const PhSentence& phi, const PhSentence& psi, std::int64_t max_terms) {
          EntailmentOptions o;
          o.truncation.max_terms = max_terms;
          auto r = decide_entailment(phi, psi, o);
          py::dict d;
          d["verdict"] = to_string(r.verdict);
          d["degenerate"] = r.degenerate;
          d["l"] = r.l;
          d["rank_bound"] = r.rank_bound;
          d["rank_reached"] = r.rank_reached;
          d["diagnostics"] = r.diagnostics;
          return d;
        },
        py::arg("phi"), py::arg("psi"), py::arg("max_terms") = 100'000);
  m.def("truncation_counts", [](const PhSentence& phi, int l, int k) {
    auto t = build_truncation(phi, l, k);
    return std::make_pair(t.terms.size(), t.facts.size());
  });

  m.def("find_qcore", [](const Structure& a) -> py::object {
    auto r = find_qcore(a);
    if (!r.found) return py::none();
    py::dict d;
    d["core"] = r.core;
    d["induced"] = r.is_induced;
    d["inconclusive"] = r.inconclusive;
    d["forward"] = verdict_dict(r.forward);
    d["backward"] = verdict_dict(r.backward);
    return d;
  });
  m.def("check_idempotency_obstruction",
        [](const Structure& h, int nonloop, int dominating) {
          return check_idempotency_obstruction(h, nonloop, dominating).holds;
        });
}
