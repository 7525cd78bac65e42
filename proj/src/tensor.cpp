#include "ditalg/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace ditalg {

Layer::Layer(Field f, Bigraph g) : F_(f), g_(std::move(g)) {
    g_.validate();
    for (const auto& p : g_.points) rings_.emplace_back(F_, p.factor);
}

bool Word::operator<(const Word& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (src != o.src) return src < o.src;
    if (arrows != o.arrows) return arrows < o.arrows;
    for (std::size_t i = 0; i < decos.size(); ++i)
        if (decos[i] != o.decos[i]) return decos[i] < o.decos[i];
    return false;
}

bool Word::operator==(const Word& o) const {
    return src == o.src && arrows == o.arrows && decos == o.decos;
}

int word_target(const Layer& L, const Word& w) { return w.arrows.empty() ? w.src : L.arrow(w.arrows.back()).t; }

int word_degree(const Layer& L, const Word& w) {
    int d = 0;
    for (int a : w.arrows) d += L.dashed(a) ? 1 : 0;
    return d;
}

TensorElement TensorElement::idempotent(const Layer& L, int point) {
    TensorElement e;
    e.add_term(Word{point, {}, {Deco{}}}, L.field().one());
    return e;
}

TensorElement TensorElement::arrow(const Layer& L, int a) {
    TensorElement e;
    e.add_term(Word{L.arrow(a).s, {a}, {Deco{}, Deco{}}}, L.field().one());
    return e;
}

TensorElement TensorElement::word(const Word& w, const Scalar& c) {
    TensorElement e;
    e.add_term(w, c);
    return e;
}

TensorElement TensorElement::local(const Layer& L, int point, const LocalElem& v) {
    TensorElement e;
    for (auto& [d, c] : L.ring(point).expand(v)) e.add_term(Word{point, {}, {d}}, c);
    return e;
}

void TensorElement::add_term(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
    TensorElement r = *this;
    r += o;
    return r;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

TensorElement TensorElement::operator-() const {
    TensorElement r;
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
}

TensorElement TensorElement::operator-(const TensorElement& o) const { return *this + (-o); }

TensorElement TensorElement::operator*(const Scalar& s) const {
    TensorElement r;
    if (s.is_zero()) return r;
    for (const auto& [w, c] : terms_) r.add_term(w, c * s);
    return r;
}

bool TensorElement::operator==(const TensorElement& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end(); ++a, ++b)
        if (!(a->first == b->first) || a->second != b->second) return false;
    return true;
}

TensorElement TensorElement::component(const Layer& L, int degree) const {
    TensorElement r;
    for (const auto& [w, c] : terms_)
        if (word_degree(L, w) == degree) r.terms_.emplace(w, c);
    return r;
}

std::optional<int> TensorElement::degree(const Layer& L) const {
    std::optional<int> d;
    for (const auto& [w, c] : terms_) {
        int k = word_degree(L, w);
        if (d && *d != k) return std::nullopt;
        d = k;
    }
    return d;
}

TensorElement TensorElement::between(const Layer& L, int i, int j) const {
    TensorElement r;
    for (const auto& [w, c] : terms_)
        if (w.src == i && word_target(L, w) == j) r.terms_.emplace(w, c);
    return r;
}

std::string word_string(const Layer& L, const Word& w) {
    std::string s;
    auto deco = [&](std::size_t k, int point) {
        const Deco& d = w.decos[k];
        if (d.is_unit_deco()) return std::string();
        return "(" + L.ring(point).deco_string(d) + ")";
    };
    if (w.arrows.empty()) {
        std::string d = deco(0, w.src);
        return (d.empty() ? "" : d + "*") + "e_" + L.point(w.src).name;
    }
    for (std::size_t k = w.arrows.size(); k-- > 0;) {
        int a = w.arrows[k];
        std::string d = deco(k + 1, L.arrow(a).t);
        if (!d.empty()) s += (s.empty() ? "" : "*") + d;
        s += (s.empty() ? "" : "*") + L.arrow(a).name;
    }
    std::string d0 = deco(0, w.src);
    if (!d0.empty()) s += "*" + d0;
    return s;
}

std::string TensorElement::to_string(const Layer& L) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        std::string cs = c.to_string();
        if (!first) os << " + ";
        first = false;
        if (!c.is_one()) os << (cs.find_first_of("+-/", 1) != std::string::npos ? "(" + cs + ")" : cs) << "*";
        os << word_string(L, w);
    }
    return os.str();
}

TensorElement multiply(const Layer& L, const TensorElement& u, const TensorElement& v) {
    TensorElement r;
    for (const auto& [wv, cv] : v.terms()) {
        int mid = word_target(L, wv);
        for (const auto& [wu, cu] : u.terms()) {
            if (wu.src != mid) continue;
            Scalar c = cu * cv;
            DecoSum junction = L.ring(mid).mul(wv.decos.back(), wu.decos.front());
            for (const auto& [d, k] : junction) {
                Word w;
                w.src = wv.src;
                w.arrows = wv.arrows;
                w.arrows.insert(w.arrows.end(), wu.arrows.begin(), wu.arrows.end());
                w.decos.assign(wv.decos.begin(), wv.decos.end() - 1);
                w.decos.push_back(d);
                w.decos.insert(w.decos.end(), wu.decos.begin() + 1, wu.decos.end());
                r.add_term(w, c * k);
            }
        }
    }
    return r;
}

TensorElement multiply(const Layer& L, const std::vector<TensorElement>& factors) {
    if (factors.empty()) throw std::invalid_argument("empty product");
    TensorElement r = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) r = multiply(L, factors[i], r);
    return r;
}

TensorElement extend_differential(const Layer& L, const std::vector<TensorElement>& delta, const TensorElement& e) {
    TensorElement out;
    for (const auto& [w, c] : e.terms()) {
        std::size_t n = w.arrows.size();
        for (std::size_t k = 0; k < n; ++k) {
            const TensorElement& d = delta[static_cast<std::size_t>(w.arrows[k])];
            if (d.is_zero()) continue;
            int left_dashed = 0;
            for (std::size_t j = k + 1; j < n; ++j) left_dashed += L.dashed(w.arrows[j]) ? 1 : 0;
            const Arrow& a = L.arrow(w.arrows[k]);
            Word right{w.src, {w.arrows.begin(), w.arrows.begin() + static_cast<long>(k)},
                       {w.decos.begin(), w.decos.begin() + static_cast<long>(k) + 1}};
            Word left{a.t, {w.arrows.begin() + static_cast<long>(k) + 1, w.arrows.end()},
                      {w.decos.begin() + static_cast<long>(k) + 1, w.decos.end()}};
            TensorElement t = multiply(L, TensorElement::word(left, c),
                                       multiply(L, d, TensorElement::word(right, L.field().one())));
            out += (left_dashed % 2 ? -t : t);
        }
    }
    return out;
}

std::vector<Deco> decorations(const Layer& L, int point, int deco_cap) {
    std::vector<Deco> out;
    const FactorRing& R = L.ring(point);
    if (!R.rational()) return {Deco{}};
    int hd = R.h().degree();
    for (int r = 0; r <= deco_cap; ++r) out.push_back(Deco{r, 0});
    if (hd > 0)
        for (int n = 1; n <= deco_cap; ++n)
            for (int r = 0; r < hd; ++r) out.push_back(Deco{r, n});
    return out;
}

std::vector<Word> enumerate_words(const Layer& L, int i, int j, int degree, int max_len, int deco_cap) {
    std::vector<Word> out;
    // Arrow sequences first, decorations expanded afterwards.
    std::vector<std::vector<int>> paths;
    std::vector<int> cur;
    std::function<void(int, int)> walk = [&](int at, int deg) {
        if (at == j && deg == degree) paths.push_back(cur);
        if (static_cast<int>(cur.size()) >= max_len) return;
        for (int a = 0; a < L.narrows(); ++a) {
            const Arrow& ar = L.arrow(a);
            if (ar.s != at) continue;
            int nd = deg + (ar.dashed ? 1 : 0);
            if (nd > degree) continue;
            cur.push_back(a);
            walk(ar.t, nd);
            cur.pop_back();
        }
    };
    walk(i, 0);
    for (const auto& p : paths) {
        std::vector<int> pts{i};
        for (int a : p) pts.push_back(L.arrow(a).t);
        std::vector<std::vector<Deco>> choices;
        for (int q : pts) choices.push_back(decorations(L, q, deco_cap));
        std::vector<std::size_t> idx(choices.size(), 0);
        for (;;) {
            Word w{i, p, {}};
            for (std::size_t k = 0; k < idx.size(); ++k) w.decos.push_back(choices[k][idx[k]]);
            out.push_back(w);
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Word> graded_component_basis(const Layer& L, int i, int j, int degree, int word_length_cap,
                                         int deco_cap) {
    if (!check_directed(L.graph())) throw std::invalid_argument("graded_component_basis needs a directed bigraph");
    int len = std::max(word_length_cap, L.npoints());
    return enumerate_words(L, i, j, degree, len, deco_cap);
}

TensorElement apply_morphism(const Layer& src, const Layer& tgt, const TensorElement& e,
                             const std::function<TensorElement(int)>& arrow_img,
                             const std::function<TensorElement(int, const Deco&)>& deco_img) {
    TensorElement out;
    for (const auto& [w, c] : e.terms()) {
        TensorElement acc = deco_img(w.src, w.decos[0]);
        for (std::size_t k = 0; k < w.arrows.size() && !acc.is_zero(); ++k) {
            int a = w.arrows[k];
            acc = multiply(tgt, arrow_img(a), acc);
            acc = multiply(tgt, deco_img(src.arrow(a).t, w.decos[k + 1]), acc);
        }
        out += acc * c;
    }
    return out;
}

}  // namespace ditalg
