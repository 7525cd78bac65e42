#include "ditalg/dit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ditalg {

int Dit::point(const std::string& name) const {
    int p = graph().point_index(name);
    if (p < 0) throw std::invalid_argument("unknown point '" + name + "'");
    return p;
}

int Dit::arrow(const std::string& name) const {
    int a = graph().arrow_index(name);
    if (a < 0) throw std::invalid_argument("unknown arrow '" + name + "'");
    return a;
}

std::vector<TensorElement> normalize_ideal(const Layer& L, const std::vector<TensorElement>& gens) {
    std::vector<TensorElement> out;
    for (const auto& g : gens)
        for (int i = 0; i < L.npoints(); ++i)
            for (int j = 0; j < L.npoints(); ++j) {
                TensorElement c = g.between(L, i, j);
                if (!c.is_zero()) out.push_back(c);
            }
    return out;
}

std::optional<Endpoints> endpoints(const Layer& L, const TensorElement& e) {
    std::optional<Endpoints> ep;
    for (const auto& [w, c] : e.terms()) {
        Endpoints x{w.src, word_target(L, w)};
        if (ep && (ep->src != x.src || ep->tgt != x.tgt)) return std::nullopt;
        ep = x;
    }
    return ep;
}

void validate(const Dit& d) {
    const Layer& L = d.layer;
    if (static_cast<int>(d.delta.size()) != L.narrows()) throw std::invalid_argument("delta has the wrong length");
    for (int a = 0; a < L.narrows(); ++a) {
        const TensorElement& v = d.delta[static_cast<std::size_t>(a)];
        if (v.is_zero()) continue;
        const Arrow& ar = L.arrow(a);
        int want = ar.dashed ? 2 : 1;
        auto deg = v.degree(L);
        if (!deg || *deg != want)
            throw std::invalid_argument("delta(" + ar.name + ") must be homogeneous of degree " + std::to_string(want));
        if (v.between(L, ar.s, ar.t) != v)
            throw std::invalid_argument("delta(" + ar.name + ") leaves e_" + L.point(ar.t).name + " T e_" +
                                        L.point(ar.s).name);
    }
    for (const auto& h : d.ideal) {
        auto deg = h.degree(L);
        if (!deg || *deg != 0) throw std::invalid_argument("ideal generator " + h.to_string(L) + " is not in A");
        if (!endpoints(L, h)) throw std::invalid_argument("ideal generator " + h.to_string(L) + " spans several points");
    }
    if (d.ideal_filtration)
        for (const auto& layer : *d.ideal_filtration)
            for (int k : layer)
                if (k < 0 || k >= static_cast<int>(d.ideal.size()))
                    throw std::invalid_argument("ideal filtration refers to generator " + std::to_string(k));
}

std::string canonical_string(const Layer& L, const TensorElement& e) {
    if (e.is_zero()) return "0";
    std::vector<std::string> parts;
    for (const auto& [w, c] : e.terms()) parts.push_back(c.to_string() + "*" + word_string(L, w));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
    return s;
}

std::string canonical_form(const Dit& d) {
    const Layer& L = d.layer;
    std::vector<std::string> pts, arr, del, idl;
    for (const auto& p : L.graph().points) pts.push_back(p.name + ":" + p.factor.to_string());
    for (int a = 0; a < L.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        arr.push_back(ar.name + ":" + L.point(ar.s).name + (ar.dashed ? "~>" : "->") + L.point(ar.t).name);
        del.push_back(ar.name + "=" + canonical_string(L, d.delta[static_cast<std::size_t>(a)]));
    }
    for (const auto& h : d.ideal) idl.push_back(canonical_string(L, h));
    for (auto* v : {&pts, &arr, &del, &idl}) std::sort(v->begin(), v->end());
    idl.erase(std::unique(idl.begin(), idl.end()), idl.end());
    std::ostringstream os;
    os << d.field().name() << "\n";
    for (auto* v : {&pts, &arr, &del, &idl}) {
        for (const auto& s : *v) os << s << ";";
        os << "\n";
    }
    return os.str();
}

bool structurally_equal(const Dit& a, const Dit& b) { return canonical_form(a) == canonical_form(b); }

bool is_source(const Dit& d, int p) {
    if (d.layer.rational(p)) return false;
    for (const auto& a : d.graph().arrows)
        if (a.t == p) return false;
    return true;
}

}  // namespace ditalg
