// Python module quasiauto._core: structures loaded from manifests, with
// words passed as strings in the manifest's token syntax.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "qa/errors.hpp"
#include "qa/group.hpp"
#include "qa/manifest.hpp"
#include "qa/structure.hpp"

namespace py = pybind11;
using namespace qa;

namespace {

  class PyStructure {
   public:
    explicit PyStructure(Manifest m) : m_(std::move(m)) {
      if (!m_.structure) {
        throw PreconditionError("manifest has no structure");
      }
    }

    QaStructure const& s() const {
      return *m_.structure;
    }
    Alphabet const& a() const {
      return s().alphabet();
    }
    Word word(std::string const& w) const {
      return a().parse_word(w);
    }
    std::string str(Word const& w) const {
      return a().format(w);
    }
    SemigroupOracle const& oracle() const {
      if (!m_.oracle) {
        throw PreconditionError("manifest has no oracle");
      }
      return *m_.oracle;
    }
    bool has_oracle() const {
      return m_.oracle != nullptr;
    }

   private:
    Manifest m_;
  };

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quasi-automatic structures: representatives, word problem, derivations.";

  auto base = py::register_exception<Error>(m, "QaError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<AlphabetMismatch>(m, "AlphabetMismatch", base);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<InvalidStructure>(m, "InvalidStructure", base);

  py::class_<PyStructure>(m, "Structure")
      .def_property_readonly("alphabet", [](PyStructure const& p) { return p.a().tokens(); })
      .def_property_readonly("mode", [](PyStructure const& p) { return std::string(to_string(p.s().mode())); })
      .def_property_readonly("has_oracle", &PyStructure::has_oracle)
      .def_property_readonly("growth_constant", [](PyStructure const& p) { return p.s().growth_constant(); })
      .def_property_readonly("lipschitz_constant",
                             [](PyStructure const& p) { return p.s().lipschitz_constant(); })
      .def(
          "representative",
          [](PyStructure const& p, std::string const& u, std::size_t max_steps) {
            return p.str(representative(p.s(), p.word(u), {.max_steps = max_steps}));
          },
          py::arg("word"), py::arg("max_steps") = 1'000'000)
      .def("word_problem",
           [](PyStructure const& p, std::string const& u, std::string const& v) {
             return word_problem(p.s(), p.word(u), p.word(v));
           })
      .def("oracle_equal",
           [](PyStructure const& p, std::string const& u, std::string const& v) {
             auto const& o = p.oracle();
             return o.eval(p.word(u)) == o.eval(p.word(v));
           })
      .def("derivation",
           [](PyStructure const& p, std::string const& u, std::string const& v) {
             std::vector<std::string> out;
             for (auto const& w : derivation(p.s(), p.word(u), p.word(v)).steps) {
               out.push_back(p.str(w));
             }
             return out;
           })
      .def(
          "validate",
          [](PyStructure const& p, std::size_t depth) {
            auto r = validate(p.s(), p.oracle(), depth);
            return py::dict(py::arg("passed") = r.passed, py::arg("pairs_checked") = r.pairs_checked,
                            py::arg("issue_count") = r.issue_count);
          },
          py::arg("depth") = 4)
      .def(
          "lipschitz_certificate",
          [](PyStructure const& p, std::string const& u, std::string const& v, std::optional<std::string> a) {
            std::optional<Symbol> letter;
            if (a) {
              letter = p.a().symbol(*a);
            }
            auto c = lipschitz_certificate(p.s(), p.oracle(), p.word(u), p.word(v), letter);
            std::vector<std::size_t> d{c.start.distance};
            for (auto const& st : c.steps) {
              d.push_back(st.distance);
            }
            return py::dict(py::arg("verified") = c.verified, py::arg("bound") = c.bound,
                            py::arg("distances") = d);
          },
          py::arg("u"), py::arg("v"), py::arg("letter") = py::none())
      .def(
          "is_group",
          [](PyStructure const& p, std::optional<std::string> l1) {
            if (l1) {
              return is_group(p.s(), p.word(*l1));
            }
            if (!p.s().neutral_rep()) {
              throw PreconditionError("no neutral representative; pass l1");
            }
            return is_group(p.s(), *p.s().neutral_rep());
          },
          py::arg("l1") = py::none())
      .def(
          "find_neutral",
          [](PyStructure const& p, std::size_t budget) -> std::optional<std::string> {
            auto r = find_neutral(p.s(), budget);
            if (r.neutral) {
              return p.str(*r.neutral);
            }
            return std::nullopt;
          },
          py::arg("budget") = 8)
      .def(
          "is_finite",
          [](PyStructure const& p, std::size_t budget) {
            auto f = is_finite(p.s(), budget);
            return py::make_tuple(std::string(to_string(f.verdict)), f.n, f.classes);
          },
          py::arg("budget") = 8)
      .def("relator_decomposition", [](PyStructure const& p, std::string const& w) {
        auto d = relator_decomposition(p.s(), p.oracle(), p.word(w));
        std::vector<std::pair<std::string, std::string>> out;
        for (auto const& f : d.factors) {
          out.emplace_back(p.str(f.conjugator), p.str(f.relator));
        }
        return py::make_tuple(d.verified, out);
      });

  m.def(
      "load", [](std::string const& path) { return PyStructure(load_manifest(path)); }, py::arg("path"),
      "Load a structure manifest (JSON).");
}
