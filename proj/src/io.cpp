#include "ditalg/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ditalg {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        auto pos = what.find("syntax error");
        throw ParseError(pos == std::string::npos ? what : what.substr(pos), l, c);
    }
}

const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    return j.at(key);
}

std::string need_string(const Json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string");
    return j.get<std::string>();
}

Field parse_field(const std::string& s) {
    if (s == "Q") return Field::rationals();
    std::string digits;
    if (s.size() > 1 && s[0] == 'F') digits = s.substr(1);
    if (s.rfind("GF(", 0) == 0 && s.back() == ')') digits = s.substr(3, s.size() - 4);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw ParseError("field: expected \"F<p>\" or \"Q\", got \"" + s + "\"");
    try {
        return Field::prime(std::stoll(digits));
    } catch (const std::exception& e) {
        throw ParseError(std::string("field: ") + e.what());
    }
}

DecoSum parse_coef(const Layer& L, int p, const std::string& text, const std::string& where) {
    try {
        const FactorRing& R = L.ring(p);
        if (!L.rational(p)) return {{Deco{}, L.field().parse(text)}};
        return R.expand(R.parse(text));
    } catch (const ArithmeticError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

std::string coef_string(const Layer& L, int p, const Deco& d, const Scalar& c) {
    if (!L.rational(p)) return c.to_string();
    const FactorRing& R = L.ring(p);
    LocalElem v = R.value(d);
    return R.elem_string(LocalElem{v.num * c, v.n});
}

TensorElement term_from_json(const Layer& L, const Json& t, const std::string& where) {
    if (t.is_object()) {
        int p = L.graph().point_index(need_string(need(t, "at", where), where + ".at"));
        if (p < 0) throw ParseError(where + ".at: unknown point");
        TensorElement out;
        for (const auto& [d, c] : parse_coef(L, p, need_string(need(t, "coef", where), where + ".coef"), where))
            out.add_term(Word{p, {}, {d}}, c);
        return out;
    }
    if (!t.is_array() || t.size() % 2 == 0) throw ParseError(where + ": a term is an odd-length array");
    if (t.size() == 1) throw ParseError(where + ": use {\"at\": point, \"coef\": ...} for elements of R");
    std::size_t n = t.size() / 2;
    std::vector<int> arrows;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t idx = t.size() - 2 - 2 * k;  // A_{k+1}
        std::string name = need_string(t[idx], where + "[" + std::to_string(idx) + "]");
        int a = L.graph().arrow_index(name);
        if (a < 0) throw ParseError(where + ": unknown arrow '" + name + "'");
        if (!arrows.empty() && L.arrow(arrows.back()).t != L.arrow(a).s)
            throw ParseError(where + ": arrows do not compose at '" + name + "'");
        arrows.push_back(a);
    }
    std::vector<int> pts{L.arrow(arrows[0]).s};
    for (int a : arrows) pts.push_back(L.arrow(a).t);
    std::vector<DecoSum> coefs;
    for (std::size_t k = 0; k <= n; ++k) {
        std::size_t idx = t.size() - 1 - 2 * k;  // C_k
        coefs.push_back(parse_coef(L, pts[k], need_string(t[idx], where + "[" + std::to_string(idx) + "]"), where));
    }
    TensorElement out;
    std::vector<std::size_t> pick(coefs.size(), 0);
    while (true) {
        Word w{pts[0], arrows, {}};
        Scalar c = L.field().one();
        for (std::size_t k = 0; k < coefs.size(); ++k) {
            w.decos.push_back(coefs[k][pick[k]].first);
            c *= coefs[k][pick[k]].second;
        }
        out.add_term(w, c);
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == coefs[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
    }
    return out;
}

std::vector<std::string> names_from(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected a list of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(need_string(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Json poly_list(const std::vector<Poly>& ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(p.to_string());
    return a;
}

std::vector<Poly> polys_from(const Field& f, const Json& j, const std::string& where) {
    std::vector<Poly> out;
    for (const auto& s : names_from(j, where)) {
        try {
            out.push_back(parse_poly(f, s));
        } catch (const ArithmeticError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return out;
}

std::string inline_dump(const Json& j) {
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_dump(j[i]);
        return s + "]";
    }
    if (j.is_object()) {
        std::string s = "{";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            s += (first ? "" : ", ") + Json(k).dump() + ": " + inline_dump(v);
            first = false;
        }
        return s + "}";
    }
    return j.dump();
}

// Pretty printing that keeps short containers on one line.
void pretty(const Json& j, std::size_t indent, std::string& out) {
    std::string flat = inline_dump(j);
    if (!j.is_structured() || j.empty() || indent + flat.size() <= 100) {
        out += flat;
        return;
    }
    std::string pad(indent + 2, ' ');
    bool obj = j.is_object();
    out += obj ? "{\n" : "[\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items()) {
        out += pad;
        if (obj) out += Json(k).dump() + ": ";
        pretty(v, indent + 2, out);
        out += ++i < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + (obj ? "}" : "]");
}

}  // namespace

std::string pretty_json(const Json& j) {
    std::string out;
    pretty(j, 0, out);
    return out + "\n";
}

Json element_to_json(const Layer& L, const TensorElement& e) {
    std::vector<Json> terms;
    for (const auto& [w, c] : e.terms()) {
        if (w.arrows.empty()) {
            terms.push_back(Json{{"at", L.point(w.src).name}, {"coef", coef_string(L, w.src, w.decos[0], c)}});
            continue;
        }
        Json t = Json::array();
        int p = word_target(L, w);
        t.push_back(coef_string(L, p, w.decos.back(), L.field().one()));
        for (std::size_t k = w.arrows.size(); k-- > 0;) {
            t.push_back(L.arrow(w.arrows[k]).name);
            int q = L.arrow(w.arrows[k]).s;
            t.push_back(coef_string(L, q, w.decos[k], k == 0 ? c : L.field().one()));
        }
        terms.push_back(t);
    }
    std::sort(terms.begin(), terms.end(), [](const Json& a, const Json& b) { return a.dump() < b.dump(); });
    Json out = Json::array();
    for (auto& t : terms) out.push_back(std::move(t));
    return out;
}

TensorElement element_from_json(const Layer& L, const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected a list of terms");
    TensorElement out;
    for (std::size_t i = 0; i < j.size(); ++i) out += term_from_json(L, j[i], where + "[" + std::to_string(i) + "]");
    return out;
}

Presentation parse_presentation_json(const Json& j) {
    if (!j.is_object()) throw ParseError("presentation: expected an object");
    Field F = parse_field(need_string(need(j, "field", "presentation"), "field"));
    Bigraph g;
    const Json& pts = need(j, "points", "presentation");
    if (!pts.is_array()) throw ParseError("points: expected a list");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string where = "points[" + std::to_string(i) + "]";
        const Json& p = pts[i];
        std::string name = need_string(need(p, "name", where), where + ".name");
        if (g.point_index(name) >= 0) throw ParseError(where + ": duplicate point '" + name + "'");
        std::string kind = p.contains("factor") ? need_string(p["factor"], where + ".factor") : "trivial";
        Factor fac = Factor::trivial();
        if (kind == "rational") {
            auto inv = p.contains("inverted") ? polys_from(F, p["inverted"], where + ".inverted") : std::vector<Poly>{};
            try {
                fac = inv.empty() ? Factor::polynomial_ring() : Factor::localized(inv);
            } catch (const std::exception& e) {
                throw ParseError(where + ": " + e.what());
            }
        } else if (kind != "trivial") {
            throw ParseError(where + ".factor: expected \"trivial\" or \"rational\"");
        }
        g.add_point(name, fac);
    }
    if (j.contains("arrows")) {
        const Json& arrs = j["arrows"];
        for (std::size_t i = 0; i < arrs.size(); ++i) {
            std::string where = "arrows[" + std::to_string(i) + "]";
            const Json& a = arrs[i];
            std::string name = need_string(need(a, "name", where), where + ".name");
            if (g.arrow_index(name) >= 0) throw ParseError(where + ": duplicate arrow '" + name + "'");
            std::string kind = a.contains("kind") ? need_string(a["kind"], where + ".kind") : "solid";
            if (kind != "solid" && kind != "dashed") throw ParseError(where + ".kind: expected solid or dashed");
            int s = g.point_index(need_string(need(a, "from", where), where + ".from"));
            int t = g.point_index(need_string(need(a, "to", where), where + ".to"));
            if (s < 0 || t < 0) throw ParseError(where + ": unknown endpoint");
            g.add_arrow(name, s, t, kind == "dashed");
        }
    }
    auto d = std::make_shared<Dit>(Layer(F, g));
    if (j.contains("differential")) {
        for (const auto& [name, terms] : j["differential"].items()) {
            int a = g.arrow_index(name);
            if (a < 0) throw ParseError("differential: unknown arrow '" + name + "'");
            d->delta[uz(a)] = element_from_json(d->layer, terms, "differential." + name);
        }
    }
    if (j.contains("ideal")) {
        const Json& I = j["ideal"];
        for (std::size_t i = 0; i < I.size(); ++i)
            d->ideal.push_back(element_from_json(d->layer, I[i], "ideal[" + std::to_string(i) + "]"));
    }
    if (j.contains("ideal_filtration")) {
        std::vector<std::vector<int>> filt;
        for (const auto& level : j["ideal_filtration"]) {
            std::vector<int> v;
            for (const auto& k : level) {
                if (!k.is_number_integer() || k.get<int>() < 0 || k.get<std::size_t>() >= d->ideal.size())
                    throw ParseError("ideal_filtration: index out of range");
                v.push_back(k.get<int>());
            }
            filt.push_back(v);
        }
        d->ideal_filtration = filt;
    }
    try {
        validate(*d);
    } catch (const std::exception& e) {
        throw ParseError(std::string("presentation: ") + e.what());
    }
    Presentation p;
    p.dit = d;
    if (j.contains("layer_filtration")) {
        std::vector<std::vector<std::string>> layers;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < j["layer_filtration"].size(); ++i) {
            auto names = names_from(j["layer_filtration"][i], "layer_filtration[" + std::to_string(i) + "]");
            for (const auto& n : names)
                if (g.arrow_index(n) < 0) throw ParseError("layer_filtration: unknown arrow '" + n + "'");
            seen.insert(names.begin(), names.end());
            layers.push_back(names);
        }
        for (const auto& a : g.arrows)
            if (!seen.count(a.name)) throw ParseError("layer_filtration: arrow '" + a.name + "' is missing");
        p.layer_filtration = layers;
    }
    return p;
}

Presentation parse_presentation(const std::string& text) { return parse_presentation_json(parse_json(text)); }

Presentation load_presentation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

Json dit_to_json(const Dit& d) {
    const Layer& L = d.layer;
    Json j;
    j["field"] = d.field().name();
    Json pts = Json::array();
    for (int p = 0; p < d.npoints(); ++p) {
        Json e{{"name", L.point(p).name}};
        if (L.rational(p)) {
            e["factor"] = "rational";
            if (!L.point(p).factor.inverted.empty()) e["inverted"] = poly_list(L.point(p).factor.inverted);
        }
        pts.push_back(e);
    }
    j["points"] = pts;
    Json arrs = Json::array();
    for (const auto& a : d.graph().arrows)
        arrs.push_back(Json{{"name", a.name}, {"from", L.point(a.s).name}, {"to", L.point(a.t).name},
                            {"kind", a.dashed ? "dashed" : "solid"}});
    j["arrows"] = arrs;
    std::vector<std::pair<std::string, Json>> delta;
    for (int a = 0; a < d.narrows(); ++a)
        if (!d.delta[uz(a)].is_zero()) delta.emplace_back(L.arrow(a).name, element_to_json(L, d.delta[uz(a)]));
    std::sort(delta.begin(), delta.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Json dj = Json::object();
    for (auto& [n, v] : delta) dj[n] = v;
    j["differential"] = dj;
    Json I = Json::array();
    for (const auto& h : d.ideal) I.push_back(element_to_json(L, h));
    j["ideal"] = I;
    if (d.ideal_filtration) j["ideal_filtration"] = *d.ideal_filtration;
    return j;
}

Json presentation_to_json(const Presentation& p) {
    Json j = dit_to_json(*p.dit);
    if (p.layer_filtration) j["layer_filtration"] = *p.layer_filtration;
    return j;
}

std::string emit_presentation(const Presentation& p) { return pretty_json(presentation_to_json(p)); }

std::string emit_dit(const Dit& d) { return pretty_json(dit_to_json(d)); }

Certificate check_layer_filtration(const Dit& d, const std::vector<std::vector<std::string>>& layers) {
    std::map<int, std::size_t> level;
    for (std::size_t i = 0; i < layers.size(); ++i)
        for (const auto& n : layers[i]) level[d.graph().arrow_index(n)] = i;
    for (int a = 0; a < d.narrows(); ++a)
        for (const auto& [w, c] : d.delta[uz(a)].terms())
            for (int b : w.arrows)
                if (level.at(b) >= level.at(a))
                    return {false, "δ(" + d.layer.arrow(a).name + ") uses " + d.layer.arrow(b).name +
                                       " from layer " + std::to_string(level.at(b))};
    return {true, std::to_string(layers.size()) + " layers"};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k).to_string());
        rows.push_back(r);
    }
    return rows;
}

Matrix matrix_from_json(const Field& f, const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected a list of rows");
    std::size_t r = j.size(), c = r ? j[0].size() : 0;
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!j[i].is_array() || j[i].size() != c) throw ParseError(where + ": ragged matrix");
        for (std::size_t k = 0; k < c; ++k) {
            const Json& e = j[i][k];
            try {
                if (e.is_number_integer())
                    m(i, k) = f(e.get<std::int64_t>());
                else
                    m(i, k) = f.parse(need_string(e, where));
            } catch (const ArithmeticError& ex) {
                throw ParseError(where + ": " + ex.what());
            }
        }
    }
    return m;
}

Json named_to_json(const NamedModule& m) {
    Json j;
    Json dims = Json::object();
    for (const auto& [n, v] : m.dims) dims[n] = v;
    j["dims"] = dims;
    Json X = Json::object();
    for (const auto& [n, x] : m.X)
        if (x.rows()) X[n] = matrix_to_json(x);
    j["X"] = X;
    Json maps = Json::object();
    for (const auto& [n, x] : m.maps)
        if (x.rows() && x.cols()) maps[n] = matrix_to_json(x);
    j["maps"] = maps;
    return j;
}

NamedModule named_from_json(const Field& f, const Json& j, const std::string& where) {
    NamedModule m;
    if (j.contains("dims"))
        for (const auto& [n, v] : j["dims"].items()) {
            if (!v.is_number_unsigned() && !v.is_number_integer()) throw ParseError(where + ".dims." + n + ": expected an integer");
            m.dims[n] = v.get<std::size_t>();
        }
    if (j.contains("X"))
        for (const auto& [n, v] : j["X"].items()) m.X.insert_or_assign(n, matrix_from_json(f, v, where + ".X." + n));
    if (j.contains("maps"))
        for (const auto& [n, v] : j["maps"].items())
            m.maps.insert_or_assign(n, matrix_from_json(f, v, where + ".maps." + n));
    return m;
}

Json module_to_json(const Dit& d, const Rep& m) { return named_to_json(to_named(d, m)); }

Rep module_from_json(const Dit& d, const Json& j) {
    NamedModule nm = named_from_json(d.field(), j, "module");
    for (const auto& [n, v] : nm.dims)
        if (d.graph().point_index(n) < 0) throw ParseError("module: unknown point '" + n + "'");
    for (const auto& [n, v] : nm.maps)
        if (d.graph().arrow_index(n) < 0 || d.layer.dashed(d.graph().arrow_index(n)))
            throw ParseError("module: '" + n + "' is not a solid arrow");
    Rep r = from_named(d, nm);
    std::string why;
    if (!is_valid_rep(d, r, &why)) throw ParseError("module: " + why);
    return r;
}

Rep module_from_spec(const Dit& d, const std::string& spec) {
    if (spec.size() > 2 && (spec[0] == 'S' || spec[0] == 'J') && spec[1] == ':') {
        std::string rest = spec.substr(2);
        std::string point = rest, lam = "0";
        std::size_t t = 1;
        auto at = rest.find('@');
        if (at != std::string::npos) {
            point = rest.substr(0, at);
            lam = rest.substr(at + 1);
        }
        auto caret = lam.find('^');
        if (caret != std::string::npos) {
            t = static_cast<std::size_t>(std::stoul(lam.substr(caret + 1)));
            lam = lam.substr(0, caret);
        }
        int p = d.graph().point_index(point);
        if (p < 0) throw ParseError("module spec: unknown point '" + point + "'");
        Scalar l = d.field().parse(lam);
        if (!d.layer.rational(p)) {
            if (spec[0] == 'J' || at != std::string::npos) throw ParseError("module spec: '" + point + "' is trivial");
            return simple_rep(d, p);
        }
        Rep r = jordan_module(d, p, l, t);
        if (!d.layer.ring(p).admissible_operator(r.X[uz(p)]))
            throw ParseError("module spec: an inverted polynomial vanishes at " + lam);
        return r;
    }
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open module file '" + spec + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return module_from_json(d, parse_json(ss.str()));
}

Json step_to_json(const Step& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    if (!s.points.empty()) j["points"] = s.points;
    if (!s.arrows.empty()) j["arrows"] = s.arrows;
    if (!s.new_names.empty()) j["new_names"] = s.new_names;
    if (s.matrix) j["matrix"] = matrix_to_json(*s.matrix);
    if (s.admissible) {
        Json a;
        a["b_arrows"] = s.admissible->b_arrows;
        Json fin = Json::array();
        for (const auto& f : s.admissible->fin) fin.push_back(Json{{"label", f.label}, {"module", named_to_json(f.module)}});
        a["fin"] = fin;
        Json loc = Json::array();
        for (const auto& l : s.admissible->loc)
            loc.push_back(Json{{"label", l.label}, {"point", l.point}, {"inverted", poly_list(l.inverted)}});
        a["loc"] = loc;
        j["admissible"] = a;
    }
    return j;
}

Step step_from_json(const Field& f, const Json& j) {
    Step s;
    std::string kind = need_string(need(j, "kind", "step"), "step.kind");
    static const std::vector<StepKind> kinds{StepKind::deletion,   StepKind::regularization, StepKind::factor_out,
                                             StepKind::absorption, StepKind::basechange,     StepKind::admissible,
                                             StepKind::composite};
    bool found = false;
    for (auto k : kinds)
        if (to_string(k) == kind) {
            s.kind = k;
            found = true;
        }
    if (!found) throw ParseError("step.kind: unknown kind '" + kind + "'");
    if (j.contains("points")) s.points = names_from(j["points"], "step.points");
    if (j.contains("arrows")) s.arrows = names_from(j["arrows"], "step.arrows");
    if (j.contains("new_names")) s.new_names = names_from(j["new_names"], "step.new_names");
    if (j.contains("matrix")) s.matrix = matrix_from_json(f, j["matrix"], "step.matrix");
    if (j.contains("admissible")) {
        const Json& a = j["admissible"];
        AdmissibleSpec spec;
        if (a.contains("b_arrows")) spec.b_arrows = names_from(a["b_arrows"], "step.admissible.b_arrows");
        if (a.contains("fin"))
            for (const auto& e : a["fin"])
                spec.fin.push_back({need_string(need(e, "label", "fin"), "fin.label"),
                                    named_from_json(f, need(e, "module", "fin"), "fin.module")});
        if (a.contains("loc"))
            for (const auto& e : a["loc"])
                spec.loc.push_back({need_string(need(e, "label", "loc"), "loc.label"),
                                    need_string(need(e, "point", "loc"), "loc.point"),
                                    e.contains("inverted") ? polys_from(f, e["inverted"], "loc.inverted")
                                                           : std::vector<Poly>{}});
        s.admissible = spec;
    }
    return s;
}

ReportFile make_report_file(const Dit& source, const ClassificationReport& r) {
    ReportFile f;
    f.field = source.field().name();
    f.source = dit_to_json(source);
    const ReduceOutcome& red = r.reduction;
    if (red.minimal) f.minimal = dit_to_json(*red.minimal);
    f.steps = red.plan.steps;
    f.log = red.plan.log;
    f.weights = red.weights;
    f.simples = r.simples;
    for (const auto& fam : r.families) {
        ReportFile::FamilyEntry e;
        e.point = fam.point;
        for (const auto& h : fam.inverted) e.inverted.push_back(h.to_string());
        e.weight = fam.weight;
        if (fam.Z) e.Z = to_named(source, *fam.Z);
        for (const auto& l : fam.lambdas) e.lambdas.push_back(l.to_string());
        e.specializations_ok = fam.specializations_ok;
        f.families.push_back(e);
    }
    for (const auto& m : r.indecomposables) f.indecomposables.push_back({m.origin, to_named(source, m.module)});
    f.dedup = r.dedup;
    f.exceptions = r.exceptions;
    f.obstruction = red.obstruction;
    return f;
}

Json report_to_json(const ReportFile& r) {
    Json j;
    j["field"] = r.field;
    j["source"] = r.source;
    j["minimal"] = r.minimal;
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back(step_to_json(s));
    j["steps"] = steps;
    j["log"] = r.log;
    j["weights"] = r.weights;
    j["simples"] = r.simples;
    Json fams = Json::array();
    for (const auto& f : r.families)
        fams.push_back(Json{{"point", f.point},
                            {"inverted", f.inverted},
                            {"weight", f.weight},
                            {"Z", named_to_json(f.Z)},
                            {"lambdas", f.lambdas},
                            {"specializations_ok", f.specializations_ok}});
    j["families"] = fams;
    Json mods = Json::array();
    for (const auto& m : r.indecomposables) mods.push_back(Json{{"origin", m.origin}, {"module", named_to_json(m.module)}});
    j["indecomposables"] = mods;
    j["dedup"] = r.dedup;
    j["exceptions"] = r.exceptions;
    if (r.obstruction)
        j["obstruction"] = Json{{"reason", r.obstruction->reason}, {"presentation", r.obstruction->presentation}};
    else
        j["obstruction"] = nullptr;
    return j;
}

ReportFile report_from_json(const Json& j) {
    ReportFile r;
    r.field = need_string(need(j, "field", "report"), "report.field");
    Field F = parse_field(r.field);
    Field K = Field::function_field(F);
    r.source = need(j, "source", "report");
    r.minimal = j.value("minimal", Json());
    for (const auto& s : need(j, "steps", "report")) r.steps.push_back(step_from_json(F, s));
    r.log = names_from(need(j, "log", "report"), "report.log");
    r.weights = need(j, "weights", "report").get<std::vector<std::size_t>>();
    r.simples = names_from(need(j, "simples", "report"), "report.simples");
    for (const auto& f : need(j, "families", "report")) {
        ReportFile::FamilyEntry e;
        e.point = need_string(need(f, "point", "family"), "family.point");
        e.inverted = names_from(need(f, "inverted", "family"), "family.inverted");
        e.weight = need(f, "weight", "family").get<std::size_t>();
        e.Z = named_from_json(K, need(f, "Z", "family"), "family.Z");
        e.lambdas = names_from(need(f, "lambdas", "family"), "family.lambdas");
        e.specializations_ok = need(f, "specializations_ok", "family").get<bool>();
        r.families.push_back(e);
    }
    for (const auto& m : need(j, "indecomposables", "report"))
        r.indecomposables.push_back({need_string(need(m, "origin", "module"), "module.origin"),
                                     named_from_json(F, need(m, "module", "module"), "module")});
    r.dedup = names_from(need(j, "dedup", "report"), "report.dedup");
    r.exceptions = need_string(need(j, "exceptions", "report"), "report.exceptions");
    if (j.contains("obstruction") && !j["obstruction"].is_null())
        r.obstruction = Obstruction{need_string(j["obstruction"]["reason"], "obstruction.reason"),
                                    need_string(j["obstruction"]["presentation"], "obstruction.presentation")};
    return r;
}

}  // namespace ditalg
