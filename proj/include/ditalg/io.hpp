// Presentation, module, plan and report files (JSON).
//
// Presentation grammar:
//   { "field": "F<p>" | "Q",
//     "points": [ {"name": N, "factor": "trivial" | "rational", "inverted": [POLY...]} ... ],
//     "arrows": [ {"name": N, "from": N, "to": N, "kind": "solid" | "dashed"} ... ],
//     "layer_filtration": [[N...] ...],          optional
//     "differential": { N: [TERM...] ... },      omitted arrows have δ = 0
//     "ideal": [[TERM...] ...],
//     "ideal_filtration": [[INDEX...] ...] }     optional, cumulative
//   TERM := [C_n, A_n, ..., A_1, C_0]   read right to left, A_1 acting first
//         | {"at": N, "coef": C}        an element of R at a point
//   C    := a string such as "1", "-3/2", "x^2-3*x+1" or "(x+1)/(x-2)^2"
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ditalg/pipeline.hpp"
#include "json.hpp"

namespace ditalg {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : std::runtime_error(line ? msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                                  : msg),
          line(line),
          column(column) {}
    int line;
    int column;
};

struct Presentation {
    std::shared_ptr<const Dit> dit;
    std::optional<std::vector<std::vector<std::string>>> layer_filtration;
};

Presentation parse_presentation(const std::string& text);
Presentation load_presentation(const std::string& path);
Json presentation_to_json(const Presentation& p);
std::string emit_presentation(const Presentation& p);
std::string emit_dit(const Dit& d);
std::string pretty_json(const Json& j);

// Whether each generator's differential only uses generators of earlier layers.
Certificate check_layer_filtration(const Dit& d, const std::vector<std::vector<std::string>>& layers);

Json element_to_json(const Layer& L, const TensorElement& e);
TensorElement element_from_json(const Layer& L, const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Field& f, const Json& j, const std::string& where);
Json named_to_json(const NamedModule& m);
NamedModule named_from_json(const Field& f, const Json& j, const std::string& where);
Json module_to_json(const Dit& d, const Rep& m);
Rep module_from_json(const Dit& d, const Json& j);
// "S:p" (simple), "S:p@λ" (simple at a rational point), "J:p@λ^t" (Jordan
// module), or the path of a module file.
Rep module_from_spec(const Dit& d, const std::string& spec);

Json step_to_json(const Step& s);
Step step_from_json(const Field& f, const Json& j);

// Machine-readable mirror of a classification report.
struct ReportFile {
    std::string field;
    Json source;
    Json minimal;
    std::vector<Step> steps;
    std::vector<std::string> log;
    std::vector<std::size_t> weights;
    std::vector<std::string> simples;
    struct FamilyEntry {
        std::string point;
        std::vector<std::string> inverted;
        std::size_t weight = 0;
        NamedModule Z;
        std::vector<std::string> lambdas;
        bool specializations_ok = false;
    };
    std::vector<FamilyEntry> families;
    struct ModuleEntry {
        std::string origin;
        NamedModule module;
    };
    std::vector<ModuleEntry> indecomposables;
    std::vector<std::string> dedup;
    std::string exceptions;
    std::optional<Obstruction> obstruction;
};

ReportFile make_report_file(const Dit& source, const ClassificationReport& r);
Json report_to_json(const ReportFile& r);
ReportFile report_from_json(const Json& j);

}  // namespace ditalg
