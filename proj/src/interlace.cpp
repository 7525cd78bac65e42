#include "ditalg/interlace.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace ditalg {

ElementSpan::ElementSpan(const Field& f, const std::vector<TensorElement>& gens) : F_(f), echelon_(f, 0, 0) {
    std::set<Word> all;
    for (const auto& g : gens)
        for (const auto& [w, c] : g.terms()) all.insert(w);
    words_.assign(all.rbegin(), all.rend());
    for (std::size_t k = 0; k < words_.size(); ++k) index_[words_[k]] = k;
    Matrix m(F_, gens.size(), words_.size());
    for (std::size_t r = 0; r < gens.size(); ++r)
        for (const auto& [w, c] : gens[r].terms()) m(r, index_[w]) = F_.coerce(c);
    auto rr = m.rref();
    rank_ = rr.pivots.size();
    echelon_ = rr.reduced.block(0, 0, rank_, words_.size());
    pivot_col_ = rr.pivots;
}

TensorElement ElementSpan::reduce(const TensorElement& x) const {
    std::vector<Scalar> v(words_.size(), F_.zero());
    TensorElement outside;
    for (const auto& [w, c] : x.terms()) {
        auto it = index_.find(w);
        if (it == index_.end())
            outside.add_term(w, c);
        else
            v[it->second] = F_.coerce(c);
    }
    for (std::size_t r = 0; r < rank_; ++r) {
        Scalar f = v[pivot_col_[r]];
        if (f.is_zero()) continue;
        for (std::size_t k = pivot_col_[r]; k < words_.size(); ++k)
            if (!echelon_(r, k).is_zero()) v[k] = v[k] - f * echelon_(r, k);
    }
    TensorElement out = outside;
    for (std::size_t k = 0; k < words_.size(); ++k) out.add_term(words_[k], v[k]);
    return out;
}

bool ElementSpan::contains(const TensorElement& x) const { return reduce(x).is_zero(); }

std::vector<TensorElement> ideal_piece(const Dit& d, const std::vector<TensorElement>& gens, int i, int j,
                                       int degree, bool with_delta, const Caps& caps) {
    const Layer& L = d.layer;
    std::vector<TensorElement> out;
    auto sandwich = [&](const TensorElement& h, int rest) {
        auto ep = endpoints(L, h);
        if (!ep) return;
        for (int dl = 0; dl <= rest; ++dl) {
            auto lefts = enumerate_words(L, ep->tgt, j, dl, caps.word_length, caps.deco);
            if (lefts.empty()) continue;
            auto rights = enumerate_words(L, i, ep->src, rest - dl, caps.word_length, caps.deco);
            for (const auto& r : rights) {
                TensorElement hr = multiply(L, h, TensorElement::word(r, L.field().one()));
                if (hr.is_zero()) continue;
                for (const auto& l : lefts) {
                    TensorElement p = multiply(L, TensorElement::word(l, L.field().one()), hr);
                    if (!p.is_zero()) out.push_back(std::move(p));
                }
            }
        }
    };
    for (const auto& h : gens) {
        sandwich(h, degree);
        if (with_delta && degree >= 1) {
            TensorElement dh = extend_differential(L, d.delta, h);
            if (!dh.is_zero()) sandwich(dh, degree - 1);
        }
    }
    return out;
}

GeneratedIdeal generated_ideal(const Dit& d, int i, int j, const Caps& caps) {
    GeneratedIdeal g;
    g.I = ideal_piece(d, d.ideal, i, j, 0, false, caps);
    g.I_V = ideal_piece(d, d.ideal, i, j, 1, true, caps);
    return g;
}

Certificate check_directed_cert(const Dit& d) {
    auto cyc = find_cycle(d.graph());
    if (!cyc) return {true, "no oriented cycle"};
    std::string s;
    for (int p : *cyc) s += d.layer.point(p).name + " -> ";
    s += d.layer.point(cyc->front()).name;
    return {false, "oriented cycle " + s};
}

Certificate check_balanced(const Dit& d, const Caps& caps) {
    const Layer& L = d.layer;
    for (const auto& h : d.ideal) {
        TensorElement dh = extend_differential(L, d.delta, h);
        if (dh.is_zero()) continue;
        auto ep = endpoints(L, h);
        ElementSpan span(L.field(), ideal_piece(d, d.ideal, ep->src, ep->tgt, 1, false, caps));
        if (!span.contains(dh))
            return {false, "delta(" + canonical_string(L, h) + ") = " + canonical_string(L, dh) + " is not in IV+VI"};
    }
    return {true, "delta(I) in IV+VI"};
}

namespace {

// Filtration level of each ideal generator (1-based).
std::optional<std::vector<int>> ideal_levels(const Dit& d, std::string& how) {
    std::size_t n = d.ideal.size();
    std::vector<int> level(n, 0);
    if (d.ideal_filtration) {
        how = "supplied filtration";
        const auto& f = *d.ideal_filtration;
        for (std::size_t t = 0; t < f.size(); ++t)
            for (int k : f[t])
                if (level[static_cast<std::size_t>(k)] == 0) level[static_cast<std::size_t>(k)] = static_cast<int>(t) + 1;
        for (std::size_t k = 0; k < n; ++k)
            if (level[k] == 0) return std::nullopt;
        return level;
    }
    if (!check_directed(d.graph())) return std::nullopt;
    how = "pair-height filtration";
    HeightMap hm = height_maps(d.graph());
    for (std::size_t k = 0; k < n; ++k) {
        auto ep = endpoints(d.layer, d.ideal[k]);
        level[k] = hm.pair_height[static_cast<std::size_t>(ep->src)][static_cast<std::size_t>(ep->tgt)] + 1;
    }
    return level;
}

}  // namespace

Certificate check_triangular_ideal(const Dit& d, const Caps& caps) {
    if (d.ideal.empty()) return {true, "I = 0"};
    const Layer& L = d.layer;
    std::string how;
    auto level = ideal_levels(d, how);
    if (!level) return {false, "no filtration supplied and the bigraph is not directed"};
    for (std::size_t k = 0; k < d.ideal.size(); ++k) {
        TensorElement dh = extend_differential(L, d.delta, d.ideal[k]);
        if (dh.is_zero()) continue;
        std::vector<TensorElement> lower;
        for (std::size_t q = 0; q < d.ideal.size(); ++q)
            if ((*level)[q] < (*level)[k]) lower.push_back(d.ideal[q]);
        auto ep = endpoints(L, d.ideal[k]);
        ElementSpan span(L.field(), ideal_piece(d, lower, ep->src, ep->tgt, 1, false, caps));
        if (!span.contains(dh))
            return {false, "layer " + std::to_string((*level)[k]) + ": delta(" + canonical_string(L, d.ideal[k]) +
                               ") is not in A H V + V H A of the previous layer"};
    }
    return {true, how};
}

Certificate check_interlaced(const Dit& d, const Caps& caps) {
    const Layer& L = d.layer;
    bool squares_vanish = true;
    for (int a = 0; a < L.narrows(); ++a) {
        TensorElement dd = extend_differential(L, d.delta, d.delta[static_cast<std::size_t>(a)]);
        if (dd.is_zero()) continue;
        squares_vanish = false;
        const Arrow& ar = L.arrow(a);
        int deg = ar.dashed ? 3 : 2;
        ElementSpan span(L.field(), ideal_piece(d, d.ideal, ar.s, ar.t, deg, true, caps));
        if (!span.contains(dd))
            return {false, "delta^2(" + ar.name + ") = " + canonical_string(L, dd) + " is not in J"};
    }
    return {true, squares_vanish ? "delta^2 = 0" : "delta^2(W) in J"};
}

std::optional<std::vector<int>> generator_levels(const Dit& d) {
    const Layer& L = d.layer;
    int n = L.narrows();
    // deps[a]: arrows of the same kind occurring in delta(a)
    std::vector<std::set<int>> deps(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        for (const auto& [w, c] : d.delta[static_cast<std::size_t>(a)].terms())
            for (int b : w.arrows)
                if (L.dashed(b) == L.dashed(a)) deps[static_cast<std::size_t>(a)].insert(b);
    std::vector<int> level(static_cast<std::size_t>(n), -1), state(static_cast<std::size_t>(n), 0);
    bool cyclic = false;
    std::function<int(int)> visit = [&](int a) -> int {
        auto ua = static_cast<std::size_t>(a);
        if (state[ua] == 2) return level[ua];
        if (state[ua] == 1) {
            cyclic = true;
            return 0;
        }
        state[ua] = 1;
        int lv = 1;
        for (int b : deps[ua]) lv = std::max(lv, visit(b) + 1);
        state[ua] = 2;
        level[ua] = lv;
        return lv;
    };
    for (int a = 0; a < n; ++a) visit(a);
    if (cyclic) return std::nullopt;
    return level;
}

Certificate check_triangular_layer(const Dit& d) {
    auto lv = generator_levels(d);
    if (!lv) return {false, "differential dependencies among generators are cyclic"};
    int top = 0;
    for (int v : *lv) top = std::max(top, v);
    return {true, "generator filtration of length " + std::to_string(top)};
}

Certificates certify(const Dit& d, const Caps& caps) {
    Certificates c;
    c.directed = check_directed_cert(d);
    c.triangular_layer = check_triangular_layer(d);
    c.balanced = check_balanced(d, caps);
    c.triangular_ideal = check_triangular_ideal(d, caps);
    c.interlaced = check_interlaced(d, caps);
    return c;
}

QuotientPresentation::QuotientPresentation(const Dit& d, const Caps& caps) : d_(d), caps_(caps) {
    for (int p = 0; p < d.npoints(); ++p)
        if (d.layer.rational(p)) throw std::invalid_argument("quotient presentation supports trivial points only");
    if (!check_directed(d.graph())) throw std::invalid_argument("quotient presentation needs a directed bigraph");
}

const QuotientPresentation::Piece& QuotientPresentation::piece(int i, int j, int degree) const {
    auto key = std::make_tuple(i, j, degree);
    auto it = pieces_.find(key);
    if (it != pieces_.end()) return it->second;
    const Layer& L = d_.layer;
    Piece pc{enumerate_words(L, i, j, degree, std::max(caps_.word_length, L.npoints()), caps_.deco),
             Matrix(L.field(), 0, 0), {}};
    for (std::size_t k = 0; k < pc.words.size(); ++k) pc.index[pc.words[k]] = k;
    auto span = ideal_piece(d_, d_.ideal, i, j, degree, degree >= 1, caps_);
    Matrix S(L.field(), pc.words.size(), span.size());
    for (std::size_t c = 0; c < span.size(); ++c)
        for (const auto& [w, x] : span[c].terms()) S(pc.index.at(w), c) = L.field().coerce(x);
    // Rows of the projection annihilate the span.
    pc.projection = S.transpose().kernel().transpose();
    return pieces_.emplace(key, std::move(pc)).first->second;
}

Matrix QuotientPresentation::project(const TensorElement& x, int i, int j, int degree) const {
    const Piece& pc = piece(i, j, degree);
    Matrix v(d_.field(), pc.words.size(), 1);
    for (const auto& [w, c] : x.terms()) {
        auto it = pc.index.find(w);
        if (it == pc.index.end()) throw std::invalid_argument("element leaves the enumerated piece");
        v(it->second, 0) = d_.field().coerce(c);
    }
    return pc.projection * v;
}

Dit lift_differential(Layer layer, const std::vector<TensorElement>& ideal,
                      const std::vector<TensorElement>& delta_dot, const Caps& caps) {
    Dit d(std::move(layer));
    const Layer& L = d.layer;
    d.ideal = normalize_ideal(L, ideal);
    if (delta_dot.size() != static_cast<std::size_t>(L.narrows()))
        throw std::invalid_argument("one differential value per arrow is required");
    for (int a = 0; a < L.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        const TensorElement& v = delta_dot[static_cast<std::size_t>(a)];
        // Kernel of the projection: I⊗W1⊗A + A⊗W1⊗I in degree 1, its analogue in degree 2.
        ElementSpan ker(L.field(), ideal_piece(d, d.ideal, ar.s, ar.t, ar.dashed ? 2 : 1, false, caps));
        d.delta[static_cast<std::size_t>(a)] = ker.reduce(v);
    }
    validate(d);
    Certificate bal = check_balanced(d, caps);
    if (!bal.ok) throw std::invalid_argument("the differential does not vanish on [R+I]/I: " + bal.detail);
    Certificate inter = check_interlaced(d, caps);
    if (!inter.ok) throw std::invalid_argument("lifted differential is not interlaced: " + inter.detail);
    return d;
}

}  // namespace ditalg
