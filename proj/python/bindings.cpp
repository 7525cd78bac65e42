#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ditalg/fixtures.hpp"
#include "ditalg/io.hpp"

namespace py = pybind11;
using namespace ditalg;

namespace {

struct PyDit {
    Presentation p;
};

Field field_from(const std::string& name) {
    if (name == "Q") return Field::rationals();
    if (name.size() > 1 && name[0] == 'F') return Field::prime(std::stoll(name.substr(1)));
    throw py::value_error("field must be 'F<p>' or 'Q'");
}

PyDit fixture(const std::string& name, const std::string& field) {
    Field F = field_from(field);
    Dit d = name == "EX1"    ? fixture_ex1(F)
            : name == "EX2"  ? fixture_ex2(F)
            : name == "EX-I" ? fixture_exi(F)
            : name == "EXK"  ? fixture_exk(F)
            : name == "EXL"  ? fixture_exl(F)
                             : throw py::value_error("unknown fixture '" + name + "'");
    return PyDit{{std::make_shared<const Dit>(std::move(d)), std::nullopt}};
}

Rep module_arg(const Dit& d, const py::object& spec) {
    if (py::isinstance<py::str>(spec)) return module_from_spec(d, spec.cast<std::string>());
    std::string text = py::module_::import("json").attr("dumps")(spec).cast<std::string>();
    return module_from_json(d, Json::parse(text));
}

py::dict certificates(const PyDit& self) {
    Certificates c = certify(*self.p.dit);
    py::dict out;
    auto put = [&](const char* k, const Certificate& x) { out[k] = py::make_tuple(x.ok, x.detail); };
    put("directed", c.directed);
    put("triangular_layer", c.triangular_layer);
    put("triangular_ideal", c.triangular_ideal);
    put("balanced", c.balanced);
    put("interlaced", c.interlaced);
    out["roiter"] = py::make_tuple(c.roiter(), std::string());
    if (self.p.layer_filtration) put("layer_filtration", check_layer_filtration(*self.p.dit, *self.p.layer_filtration));
    return out;
}

std::string reduce_json(const PyDit& self, std::size_t bound, int budget) {
    ReduceOutcome r = reduce_to_minimal(self.p.dit, bound, budget);
    Json j;
    Json steps = Json::array();
    for (const auto& s : r.plan.steps) steps.push_back(step_to_json(s));
    j["steps"] = steps;
    j["log"] = r.plan.log;
    j["weights"] = r.weights;
    j["minimal"] = r.minimal ? presentation_to_json({r.minimal, std::nullopt}) : Json();
    if (r.obstruction)
        j["obstruction"] = Json{{"reason", r.obstruction->reason}, {"presentation", r.obstruction->presentation}};
    else
        j["obstruction"] = nullptr;
    return j.dump();
}

std::string classify_json(const PyDit& self, std::size_t bound, int budget,
                          const std::optional<std::vector<std::string>>& lambdas, std::uint64_t seed) {
    std::optional<std::vector<Scalar>> ls;
    if (lambdas) {
        ls.emplace();
        for (const auto& t : *lambdas) ls->push_back(self.p.dit->field().parse(t));
    }
    ClassificationReport rep = classify(self.p.dit, bound, budget, ls, seed);
    return report_to_json(make_report_file(*self.p.dit, rep)).dump();
}

}  // namespace

PYBIND11_MODULE(_ditalg, m) {
    m.doc() = "Exact reduction and classification for interlaced weak ditalgebras";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<PyDit>(m, "Ditalgebra")
        .def_property_readonly("field", [](const PyDit& s) { return s.p.dit->field().name(); })
        .def_property_readonly("npoints", [](const PyDit& s) { return s.p.dit->npoints(); })
        .def_property_readonly("narrows", [](const PyDit& s) { return s.p.dit->narrows(); })
        .def("to_json", [](const PyDit& s) { return emit_presentation(s.p); })
        .def("certificates", &certificates)
        .def("hom_dim",
             [](const PyDit& s, const py::object& a, const py::object& b) {
                 const Dit& d = *s.p.dit;
                 return hom_dim(d, module_arg(d, a), module_arg(d, b));
             })
        .def("is_indecomposable",
             [](const PyDit& s, const py::object& a, std::uint64_t seed) {
                 const Dit& d = *s.p.dit;
                 return is_indecomposable(d, module_arg(d, a), seed);
             },
             py::arg("module"), py::arg("seed") = 1)
        .def("_reduce", &reduce_json, py::arg("bound"), py::arg("budget") = 100)
        .def("_classify", &classify_json, py::arg("bound"), py::arg("budget") = 100, py::arg("lambdas") = py::none(),
             py::arg("seed") = 1)
        .def("__repr__", [](const PyDit& s) {
            return "<Ditalgebra over " + s.p.dit->field().name() + ": " + std::to_string(s.p.dit->npoints()) +
                   " points, " + std::to_string(s.p.dit->narrows()) + " arrows>";
        });

    m.def("parse", [](const std::string& text) { return PyDit{parse_presentation(text)}; });
    m.def("load", [](const std::string& path) { return PyDit{load_presentation(path)}; });
    m.def("fixture", &fixture, py::arg("name"), py::arg("field") = "F101");
}
