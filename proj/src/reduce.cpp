#include "ditalg/reduce.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ditalg/interlace.hpp"

namespace ditalg {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

TensorElement arrow_el(const Layer& L, int a) { return TensorElement::arrow(L, a); }

TensorElement phi_map(const Layer& src, const Layer& tgt, const std::vector<int>& pm,
                      const std::vector<TensorElement>& img, const TensorElement& e) {
    return apply_morphism(
        src, tgt, e, [&](int a) { return img[uz(a)]; },
        [&](int p, const Deco& c) {
            int q = pm[uz(p)];
            if (q < 0) return TensorElement{};
            return TensorElement::word(Word{q, {}, {c}}, tgt.field().one());
        });
}

std::vector<TensorElement> map_ideal(const Layer& src, const Layer& tgt, const std::vector<int>& pm,
                                     const std::vector<TensorElement>& img, const std::vector<TensorElement>& I) {
    std::vector<TensorElement> out;
    for (const auto& h : I) {
        TensorElement x = phi_map(src, tgt, pm, img, h);
        if (!x.is_zero()) out.push_back(x);
    }
    return normalize_ideal(tgt, out);
}

std::string unique_name(const std::string& base, std::set<std::string>& used) {
    std::string n = base;
    while (used.count(n)) n += "'";
    used.insert(n);
    return n;
}

int arrow_by_name(const Dit& d, const std::string& name) {
    int a = d.graph().arrow_index(name);
    if (a < 0) throw ReductionError("unknown arrow '" + name + "'");
    return a;
}

int point_by_name(const Dit& d, const std::string& name) {
    int p = d.graph().point_index(name);
    if (p < 0) throw ReductionError("unknown point '" + name + "'");
    return p;
}

bool mentions(const TensorElement& e, int a) {
    for (const auto& [w, c] : e.terms())
        if (std::find(w.arrows.begin(), w.arrows.end(), a) != w.arrows.end()) return true;
    return false;
}

}  // namespace

std::string to_string(StepKind k) {
    switch (k) {
        case StepKind::deletion: return "deletion";
        case StepKind::regularization: return "regularization";
        case StepKind::factor_out: return "factor_out";
        case StepKind::absorption: return "absorption";
        case StepKind::basechange: return "basechange";
        case StepKind::admissible: return "admissible";
        case StepKind::composite: return "composite";
    }
    return "?";
}

std::string Step::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    auto list = [&](const std::vector<std::string>& v) {
        os << " [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
        os << "]";
    };
    if (!points.empty()) list(points);
    if (!arrows.empty()) list(arrows);
    if (!new_names.empty()) list(new_names);
    if (admissible) {
        std::vector<std::string> labels;
        for (const auto& f : admissible->fin) labels.push_back(f.label);
        for (const auto& l : admissible->loc) labels.push_back(l.label);
        os << " B";
        list(admissible->b_arrows);
        os << " X";
        list(labels);
    }
    return os.str();
}

NamedModule to_named(const Dit& d, const Rep& m) {
    NamedModule out;
    for (int p = 0; p < d.npoints(); ++p) {
        const std::string& n = d.layer.point(p).name;
        out.dims[n] = m.dims[uz(p)];
        if (d.layer.rational(p)) out.X.emplace(n, m.X[uz(p)]);
    }
    for (int a = 0; a < d.narrows(); ++a)
        if (!d.layer.dashed(a)) out.maps.emplace(d.layer.arrow(a).name, m.maps[uz(a)]);
    return out;
}

Rep from_named(const Dit& d, const NamedModule& m) {
    std::vector<std::size_t> dims(uz(d.npoints()), 0);
    for (const auto& [n, v] : m.dims) dims[uz(point_by_name(d, n))] = v;
    Rep r = zero_rep(d, d.field(), dims);
    // Empty matrices carry no shape information and keep the zero default.
    for (const auto& [n, x] : m.X)
        if (x.rows() && x.cols()) r.X[uz(point_by_name(d, n))] = x;
    for (const auto& [n, x] : m.maps) {
        int a = d.graph().arrow_index(n);
        if (a >= 0 && x.rows() && x.cols()) r.maps[uz(a)] = x;
    }
    return r;
}

// ---------------------------------------------------------------- quotients

QuotientReduction::QuotientReduction(Step s, std::shared_ptr<const Dit> src, std::shared_ptr<const Dit> tgt,
                                     std::vector<int> point_map, std::vector<TensorElement> arrow_img)
    : Reduction(std::move(s), std::move(src), std::move(tgt)),
      point_map_(std::move(point_map)),
      arrow_img_(std::move(arrow_img)) {
    const Dit& a = *src_;
    const Dit& b = *tgt_;
    validate(b);
    for (int k = 0; k < a.narrows(); ++k) {
        TensorElement lhs = extend_differential(b.layer, b.delta, arrow_img_[uz(k)]);
        TensorElement rhs = map(a.delta[uz(k)]);
        TensorElement diff = lhs - rhs;
        if (diff.is_zero()) continue;
        const Arrow& ar = a.layer.arrow(k);
        int i = point_map_[uz(ar.s)], j = point_map_[uz(ar.t)];
        bool ok = false;
        if (i >= 0 && j >= 0) {
            ElementSpan J(b.field(), ideal_piece(b, b.ideal, i, j, ar.dashed ? 2 : 1, true, Caps{}));
            ok = J.contains(diff);
        }
        if (!ok) throw ReductionError("the square δ'φ = φδ fails at generator " + ar.name);
    }
}

TensorElement QuotientReduction::map(const TensorElement& e) const {
    return phi_map(src_->layer, tgt_->layer, point_map_, arrow_img_, e);
}

Rep QuotientReduction::apply(const Rep& n) const {
    const Dit& a = *src_;
    const Dit& b = *tgt_;
    std::vector<std::size_t> dims(uz(a.npoints()), 0);
    for (int p = 0; p < a.npoints(); ++p)
        if (point_map_[uz(p)] >= 0) dims[uz(p)] = n.dims[uz(point_map_[uz(p)])];
    Rep m = zero_rep(a, n.field, dims);
    for (int p = 0; p < a.npoints(); ++p)
        if (point_map_[uz(p)] >= 0 && a.layer.rational(p)) m.X[uz(p)] = n.X[uz(point_map_[uz(p)])];
    for (int k = 0; k < a.narrows(); ++k) {
        const Arrow& ar = a.layer.arrow(k);
        if (ar.dashed) continue;
        int i = point_map_[uz(ar.s)], j = point_map_[uz(ar.t)];
        if (i < 0 || j < 0) continue;
        m.maps[uz(k)] = act(b, n, arrow_img_[uz(k)], i, j);
    }
    return m;
}

Morphism QuotientReduction::apply(const Rep& n, const Rep& n2, const Morphism& f) const {
    const Dit& a = *src_;
    const Dit& b = *tgt_;
    Rep m = apply(n), m2 = apply(n2);
    Morphism g = zero_morphism(a, m, m2);
    for (int p = 0; p < a.npoints(); ++p)
        if (point_map_[uz(p)] >= 0) g.f0[uz(p)] = f.f0[uz(point_map_[uz(p)])];
    for (int k = 0; k < a.narrows(); ++k) {
        const Arrow& ar = a.layer.arrow(k);
        if (!ar.dashed) continue;
        int i = point_map_[uz(ar.s)], j = point_map_[uz(ar.t)];
        if (i < 0 || j < 0) continue;
        g.f1[uz(k)] = eval_f1(b, n, n2, f, arrow_img_[uz(k)], i, j);
    }
    return g;
}

std::vector<std::size_t> QuotientReduction::target_weights(const std::vector<std::size_t>& w) const {
    std::vector<std::size_t> out(uz(tgt_->npoints()), 0);
    for (std::size_t p = 0; p < point_map_.size(); ++p)
        if (point_map_[p] >= 0) out[uz(point_map_[p])] = w[p];
    return out;
}

std::optional<Rep> QuotientReduction::preimage(const Rep& m) const {
    if (kind() != StepKind::deletion) throw ReductionError("preimage is available for deletions");
    const Dit& a = *src_;
    const Dit& b = *tgt_;
    std::vector<std::size_t> dims(uz(b.npoints()), 0);
    for (int p = 0; p < a.npoints(); ++p) {
        int q = point_map_[uz(p)];
        if (q < 0 && m.dims[uz(p)] != 0) return std::nullopt;
        if (q >= 0) dims[uz(q)] = m.dims[uz(p)];
    }
    Rep n = zero_rep(b, m.field, dims);
    for (int p = 0; p < a.npoints(); ++p)
        if (point_map_[uz(p)] >= 0) n.X[uz(point_map_[uz(p)])] = m.X[uz(p)];
    for (int k = 0; k < a.narrows(); ++k) {
        if (a.layer.dashed(k) || arrow_img_[uz(k)].is_zero()) continue;
        const auto& [w, c] = *arrow_img_[uz(k)].terms().begin();
        n.maps[uz(w.arrows.at(0))] = m.maps[uz(k)];
    }
    return n;
}

ReductionPtr delete_points(std::shared_ptr<const Dit> d, const std::vector<std::string>& points) {
    const Dit& a = *d;
    std::set<int> gone;
    for (const auto& n : points) gone.insert(point_by_name(a, n));
    Bigraph g;
    std::vector<int> pm(uz(a.npoints()), -1);
    for (int p = 0; p < a.npoints(); ++p)
        if (!gone.count(p)) pm[uz(p)] = g.add_point(a.layer.point(p).name, a.layer.point(p).factor);
    std::vector<int> am(uz(a.narrows()), -1);
    for (int k = 0; k < a.narrows(); ++k) {
        const Arrow& ar = a.layer.arrow(k);
        if (pm[uz(ar.s)] >= 0 && pm[uz(ar.t)] >= 0) am[uz(k)] = g.add_arrow(ar.name, pm[uz(ar.s)], pm[uz(ar.t)], ar.dashed);
    }
    auto t = std::make_shared<Dit>(Layer(a.field(), g));
    std::vector<TensorElement> img(uz(a.narrows()));
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(a.layer, t->layer, pm, img, a.delta[uz(k)]);
    t->ideal = map_ideal(a.layer, t->layer, pm, img, a.ideal);
    Step s{StepKind::deletion, points, {}, {}, std::nullopt, std::nullopt};
    return std::make_shared<QuotientReduction>(s, d, t, pm, img);
}

ReductionPtr regularize(std::shared_ptr<const Dit> d, const std::string& alpha, const std::string& v) {
    const Dit& a = *d;
    int al = arrow_by_name(a, alpha), vv = arrow_by_name(a, v);
    const Arrow& A = a.layer.arrow(al);
    const Arrow& V = a.layer.arrow(vv);
    if (A.dashed || !V.dashed) throw ReductionError("regularization needs a solid and a dashed arrow");
    if (A.s != V.s || A.t != V.t) throw ReductionError("regularization needs parallel arrows");
    Word vw{V.s, {vv}, {Deco{}, Deco{}}};
    Scalar c = a.field().zero();
    TensorElement rest;
    for (const auto& [w, x] : a.delta[uz(al)].terms()) {
        if (w == vw)
            c = x;
        else
            rest.add_term(w, x);
    }
    if (c.is_zero()) throw ReductionError("δ(" + alpha + ") has no unit multiple of " + v);
    if (mentions(rest, vv)) throw ReductionError("δ(" + alpha + ") uses " + v + " outside the leading term");
    Bigraph g;
    std::vector<int> pm(uz(a.npoints()));
    for (int p = 0; p < a.npoints(); ++p) pm[uz(p)] = g.add_point(a.layer.point(p).name, a.layer.point(p).factor);
    std::vector<int> am(uz(a.narrows()), -1);
    for (int k = 0; k < a.narrows(); ++k)
        if (k != al && k != vv) {
            const Arrow& ar = a.layer.arrow(k);
            am[uz(k)] = g.add_arrow(ar.name, ar.s, ar.t, ar.dashed);
        }
    auto t = std::make_shared<Dit>(Layer(a.field(), g));
    std::vector<TensorElement> img(uz(a.narrows()));
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    img[uz(vv)] = phi_map(a.layer, t->layer, pm, img, rest) * (-c.inverse());
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(a.layer, t->layer, pm, img, a.delta[uz(k)]);
    t->ideal = map_ideal(a.layer, t->layer, pm, img, a.ideal);
    Step s{StepKind::regularization, {}, {alpha, v}, {}, std::nullopt, std::nullopt};
    return std::make_shared<QuotientReduction>(s, d, t, pm, img);
}

ReductionPtr factor_out(std::shared_ptr<const Dit> d, const std::vector<std::string>& arrows) {
    const Dit& a = *d;
    std::set<int> S;
    for (const auto& n : arrows) {
        int k = arrow_by_name(a, n);
        if (a.layer.dashed(k)) throw ReductionError("factor_out takes solid arrows");
        S.insert(k);
    }
    for (int k : S) {
        const Arrow& ar = a.layer.arrow(k);
        ElementSpan I(a.field(), ideal_piece(a, a.ideal, ar.s, ar.t, 0, false, Caps{}));
        if (!I.contains(arrow_el(a.layer, k))) throw ReductionError(ar.name + " is not in the ideal");
        for (const auto& [w, c] : a.delta[uz(k)].terms()) {
            bool hit = false;
            for (int b : w.arrows) hit = hit || S.count(b);
            if (!hit) throw ReductionError("δ(" + ar.name + ") leaves A W'0 V + V W'0 A");
        }
    }
    Bigraph g;
    std::vector<int> pm(uz(a.npoints()));
    for (int p = 0; p < a.npoints(); ++p) pm[uz(p)] = g.add_point(a.layer.point(p).name, a.layer.point(p).factor);
    std::vector<int> am(uz(a.narrows()), -1);
    for (int k = 0; k < a.narrows(); ++k)
        if (!S.count(k)) {
            const Arrow& ar = a.layer.arrow(k);
            am[uz(k)] = g.add_arrow(ar.name, ar.s, ar.t, ar.dashed);
        }
    auto t = std::make_shared<Dit>(Layer(a.field(), g));
    std::vector<TensorElement> img(uz(a.narrows()));
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(a.layer, t->layer, pm, img, a.delta[uz(k)]);
    t->ideal = map_ideal(a.layer, t->layer, pm, img, a.ideal);
    Step s{StepKind::factor_out, {}, arrows, {}, std::nullopt, std::nullopt};
    return std::make_shared<QuotientReduction>(s, d, t, pm, img);
}

ReductionPtr absorb(std::shared_ptr<const Dit> d, const std::string& loop) {
    const Dit& a = *d;
    int l = arrow_by_name(a, loop);
    const Arrow& ar = a.layer.arrow(l);
    if (ar.dashed || ar.s != ar.t) throw ReductionError(loop + " is not a solid loop");
    if (a.layer.rational(ar.s)) throw ReductionError("absorption needs a trivial point");
    if (!a.delta[uz(l)].is_zero()) throw ReductionError("δ(" + loop + ") is not zero");
    Bigraph g;
    std::vector<int> pm(uz(a.npoints()));
    for (int p = 0; p < a.npoints(); ++p)
        pm[uz(p)] = g.add_point(a.layer.point(p).name, p == ar.s ? Factor::polynomial_ring() : a.layer.point(p).factor);
    std::vector<int> am(uz(a.narrows()), -1);
    for (int k = 0; k < a.narrows(); ++k)
        if (k != l) {
            const Arrow& b = a.layer.arrow(k);
            am[uz(k)] = g.add_arrow(b.name, b.s, b.t, b.dashed);
        }
    auto t = std::make_shared<Dit>(Layer(a.field(), g));
    std::vector<TensorElement> img(uz(a.narrows()));
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    img[uz(l)] = TensorElement::word(Word{ar.s, {}, {Deco{1, 0}}}, a.field().one());
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(a.layer, t->layer, pm, img, a.delta[uz(k)]);
    t->ideal = map_ideal(a.layer, t->layer, pm, img, a.ideal);
    Step s{StepKind::absorption, {}, {loop}, {}, std::nullopt, std::nullopt};
    return std::make_shared<QuotientReduction>(s, d, t, pm, img);
}

ReductionPtr basechange(std::shared_ptr<const Dit> d, const std::vector<std::string>& old_arrows,
                        const std::vector<std::string>& new_names, const Matrix& m) {
    const Dit& a = *d;
    std::size_t n = old_arrows.size();
    if (new_names.size() != n || m.rows() != n || m.cols() != n) throw ReductionError("basechange shape mismatch");
    auto minv = m.inverse();
    if (!minv) throw ReductionError("basechange matrix is singular");
    std::vector<int> old;
    for (const auto& s : old_arrows) old.push_back(arrow_by_name(a, s));
    const Arrow& first = a.layer.arrow(old[0]);
    for (int k : old) {
        const Arrow& ar = a.layer.arrow(k);
        if (ar.s != first.s || ar.t != first.t || ar.dashed != first.dashed)
            throw ReductionError("basechange needs parallel arrows of one kind");
    }
    Bigraph g;
    std::vector<int> pm(uz(a.npoints()));
    for (int p = 0; p < a.npoints(); ++p) pm[uz(p)] = g.add_point(a.layer.point(p).name, a.layer.point(p).factor);
    std::vector<int> am(uz(a.narrows()), -1);
    for (int k = 0; k < a.narrows(); ++k)
        if (std::find(old.begin(), old.end(), k) == old.end()) {
            const Arrow& ar = a.layer.arrow(k);
            am[uz(k)] = g.add_arrow(ar.name, ar.s, ar.t, ar.dashed);
        }
    std::vector<int> fresh;
    for (const auto& nm : new_names) fresh.push_back(g.add_arrow(nm, first.s, first.t, first.dashed));
    auto t = std::make_shared<Dit>(Layer(a.field(), g));
    std::vector<TensorElement> img(uz(a.narrows()));
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            if (!(*minv)(k, l).is_zero()) img[uz(old[k])] += arrow_el(t->layer, fresh[l]) * (*minv)(k, l);
    for (int k = 0; k < a.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(a.layer, t->layer, pm, img, a.delta[uz(k)]);
    for (std::size_t l = 0; l < n; ++l) {
        TensorElement v;
        for (std::size_t k = 0; k < n; ++k)
            if (!m(l, k).is_zero()) v += phi_map(a.layer, t->layer, pm, img, a.delta[uz(old[k])]) * m(l, k);
        t->delta[uz(fresh[l])] = v;
    }
    t->ideal = map_ideal(a.layer, t->layer, pm, img, a.ideal);
    Step s{StepKind::basechange, {}, old_arrows, new_names, m, std::nullopt};
    return std::make_shared<QuotientReduction>(s, d, t, pm, img);
}

// ---------------------------------------------------------------- admissible

std::vector<std::pair<int, Scalar>> AdmissibleData::apply_p(int j, int m) const {
    std::vector<std::pair<int, Scalar>> out;
    const RadicalElement& p = P[uz(j)];
    const Basis& x = basis[uz(m)];
    if (x.summand != p.from) return out;
    const Matrix& f = p.f0[uz(x.point)];
    for (int l : basis_at[uz(x.point)]) {
        const Basis& y = basis[uz(l)];
        if (y.summand != p.to) continue;
        const Scalar& c = f(y.index, x.index);
        if (!c.is_zero()) out.emplace_back(l, c);
    }
    return out;
}

bool AdmissibleData::coassociative() const {
    std::size_t n = P.size();
    if (n == 0) return true;
    const Field& F = b_dit->field();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    Scalar lhs = F.zero(), rhs = F.zero();
                    for (std::size_t m = 0; m < n; ++m) {
                        lhs += structure[m][i][k] * structure[l][m][j];
                        rhs += structure[m][k][j] * structure[l][i][m];
                    }
                    if (lhs != rhs) return false;
                }
    return true;
}

bool AdmissibleData::dual_bases_ok() const {
    // Σ_i x_i ν_i(x) = x on every basis vector, and likewise for P.
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const Basis& x = basis[m];
        std::size_t hits = 0;
        for (int l : basis_at[uz(x.point)]) {
            const Basis& y = basis[uz(l)];
            if (y.summand == x.summand && y.index == x.index) ++hits;
        }
        if (hits != 1) return false;
    }
    const Field& F = b_dit->field();
    for (std::size_t j = 0; j < P.size(); ++j) {
        std::vector<std::size_t> same;
        for (std::size_t k = 0; k < P.size(); ++k)
            if (P[k].from == P[j].from && P[k].to == P[j].to) same.push_back(k);
        Morphism pj{P[j].f0, std::vector<Matrix>(uz(b_dit->narrows()), Matrix(F, 0, 0))};
        Matrix target = flatten(pj, F);
        Matrix cols(F, target.rows(), same.size());
        for (std::size_t c = 0; c < same.size(); ++c)
            cols.set_block(0, c, flatten(Morphism{P[same[c]].f0, pj.f1}, F));
        auto coords = SpanCoordinates(cols).coords(target);
        if (!coords) return false;
        Matrix rebuilt = cols * *coords;
        if (rebuilt != target) return false;
        for (std::size_t c = 0; c < same.size(); ++c)
            if ((*coords)(c, 0) != (same[c] == j ? F.one() : F.zero())) return false;
    }
    return true;
}

namespace {

// Evaluates σ_{ν,x} by pushing the state Σ x_m ⊗ t_m through a word.
class SigmaEngine {
public:
    SigmaEngine(const Dit& src, const Dit& tgt, const AdmissibleData& data) : a_(src), t_(tgt), data_(data) {
        for (int k = 0; k < a_.narrows(); ++k) b_index_.push_back(data_.b_dit->graph().arrow_index(a_.layer.arrow(k).name));
    }

    TensorElement sigma(const TensorElement& e, int nu, int x) const {
        TensorElement out;
        for (const auto& [w, c] : e.terms()) {
            if (w.src != data_.basis[uz(x)].point) continue;
            std::map<int, TensorElement> state;
            state[x] = TensorElement::idempotent(t_.layer, tpoint(x));
            apply_deco(state, w.src, w.decos[0]);
            for (std::size_t k = 0; k < w.arrows.size() && !state.empty(); ++k) {
                apply_arrow(state, w.arrows[k]);
                apply_deco(state, a_.layer.arrow(w.arrows[k]).t, w.decos[k + 1]);
            }
            auto it = state.find(nu);
            if (it != state.end()) out += it->second * c;
        }
        return out;
    }

private:
    int tpoint(int m) const { return data_.summands[uz(data_.basis[uz(m)].summand)].target_point; }

    static void add(std::map<int, TensorElement>& s, int k, const TensorElement& v) {
        if (v.is_zero()) return;
        TensorElement& cur = s[k];
        cur += v;
        if (cur.is_zero()) s.erase(k);
    }

    void apply_deco(std::map<int, TensorElement>& state, int p, const Deco& c) const {
        if (c.is_unit_deco()) return;
        std::map<int, TensorElement> next;
        const FactorRing& R = a_.layer.ring(p);
        for (const auto& [m, t] : state) {
            const auto& sm = data_.summands[uz(data_.basis[uz(m)].summand)];
            if (sm.fin) {
                Matrix A = R.act(c, sm.module->X[uz(p)]);
                for (int l : data_.basis_at[uz(p)]) {
                    if (data_.basis[uz(l)].summand != data_.basis[uz(m)].summand) continue;
                    const Scalar& v = A(data_.basis[uz(l)].index, data_.basis[uz(m)].index);
                    if (!v.is_zero()) add(next, l, t * v);
                }
            } else {
                LocalElem v = R.value(c);
                const FactorRing& R2 = t_.layer.ring(sm.target_point);
                LocalElem v2 = R2.from_fraction(v.num, R.h().pow(v.n));
                add(next, m, multiply(t_.layer, TensorElement::local(t_.layer, sm.target_point, v2), t));
            }
        }
        state = std::move(next);
    }

    void apply_arrow(std::map<int, TensorElement>& state, int a) const {
        std::map<int, TensorElement> next;
        const Arrow& ar = a_.layer.arrow(a);
        for (const auto& [m, t] : state) {
            const auto& xm = data_.basis[uz(m)];
            if (b_index_[uz(a)] >= 0) {
                const auto& sm = data_.summands[uz(xm.summand)];
                if (!sm.fin) continue;  // B acts by zero on localized summands
                const Matrix& A = sm.module->maps[uz(b_index_[uz(a)])];
                for (int l : data_.basis_at[uz(ar.t)]) {
                    const auto& xl = data_.basis[uz(l)];
                    if (xl.summand != xm.summand) continue;
                    const Scalar& v = A(xl.index, xm.index);
                    if (!v.is_zero()) add(next, l, t * v);
                }
            } else {
                for (int l : data_.basis_at[uz(ar.t)]) {
                    int na = data_.new_arrow.at({a, l, m});
                    add(next, l, multiply(t_.layer, TensorElement::arrow(t_.layer, na), t));
                }
            }
        }
        state = std::move(next);
    }

    const Dit& a_;
    const Dit& t_;
    const AdmissibleData& data_;
    std::vector<int> b_index_;
};

}  // namespace

AdmissibleReduction::AdmissibleReduction(Step s, std::shared_ptr<const Dit> src, std::shared_ptr<const Dit> tgt,
                                         std::shared_ptr<const AdmissibleData> data)
    : Reduction(std::move(s), std::move(src), std::move(tgt)), data_(std::move(data)) {}

TensorElement AdmissibleReduction::sigma(const TensorElement& e, int nu, int x) const {
    return SigmaEngine(*src_, *tgt_, *data_).sigma(e, nu, x);
}

std::vector<std::size_t> AdmissibleReduction::target_weights(const std::vector<std::size_t>& w) const {
    std::vector<std::size_t> out(uz(tgt_->npoints()), 0);
    for (const auto& sm : data_->summands) {
        std::size_t v = 0;
        if (sm.fin)
            for (std::size_t p = 0; p < w.size(); ++p) v += sm.module->dims[p] * w[p];
        else
            v = w[uz(sm.point)];
        out[uz(sm.target_point)] = v;
    }
    return out;
}

namespace {

struct Offsets {
    std::vector<std::vector<std::size_t>> off;  // per point, per position in basis_at
    std::vector<std::size_t> dims;
};

Offsets offsets(const AdmissibleData& D, const Rep& n) {
    Offsets o;
    for (const auto& at : D.basis_at) {
        std::vector<std::size_t> v;
        std::size_t acc = 0;
        for (int m : at) {
            v.push_back(acc);
            acc += n.dims[uz(D.summands[uz(D.basis[uz(m)].summand)].target_point)];
        }
        o.off.push_back(v);
        o.dims.push_back(acc);
    }
    return o;
}

}  // namespace

Rep AdmissibleReduction::apply(const Rep& n) const {
    const Dit& a = *src_;
    const AdmissibleData& D = *data_;
    const Field& F = n.field;
    Offsets o = offsets(D, n);
    Rep m = zero_rep(a, F, o.dims);
    auto nd = [&](int basis_idx) { return n.dims[uz(D.summands[uz(D.basis[uz(basis_idx)].summand)].target_point)]; };
    for (int p = 0; p < a.npoints(); ++p) {
        if (!a.layer.rational(p)) continue;
        const auto& at = D.basis_at[uz(p)];
        for (std::size_t ci = 0; ci < at.size(); ++ci) {
            const auto& xm = D.basis[uz(at[ci])];
            const auto& sm = D.summands[uz(xm.summand)];
            if (!sm.fin) {
                m.X[uz(p)].set_block(o.off[uz(p)][ci], o.off[uz(p)][ci], n.X[uz(sm.target_point)]);
                continue;
            }
            std::size_t k = nd(at[ci]);
            for (std::size_t ri = 0; ri < at.size(); ++ri) {
                const auto& xl = D.basis[uz(at[ri])];
                if (xl.summand != xm.summand) continue;
                const Scalar& v = sm.module->X[uz(p)](xl.index, xm.index);
                if (!v.is_zero())
                    m.X[uz(p)].set_block(o.off[uz(p)][ri], o.off[uz(p)][ci], Matrix::identity(F, k) * v);
            }
        }
    }
    for (int k = 0; k < a.narrows(); ++k) {
        const Arrow& ar = a.layer.arrow(k);
        if (ar.dashed) continue;
        const auto& src_at = D.basis_at[uz(ar.s)];
        const auto& tgt_at = D.basis_at[uz(ar.t)];
        int bi = D.b_dit->graph().arrow_index(ar.name);
        for (std::size_t ci = 0; ci < src_at.size(); ++ci)
            for (std::size_t ri = 0; ri < tgt_at.size(); ++ri) {
                int x = src_at[ci], nu = tgt_at[ri];
                Matrix blk(F, nd(nu), nd(x));
                if (bi >= 0) {
                    const auto& xm = D.basis[uz(x)];
                    const auto& xl = D.basis[uz(nu)];
                    if (xm.summand != xl.summand || !D.summands[uz(xm.summand)].fin) continue;
                    const Scalar& v = D.summands[uz(xm.summand)].module->maps[uz(bi)](xl.index, xm.index);
                    if (v.is_zero()) continue;
                    blk = Matrix::identity(F, nd(x)) * v;
                } else {
                    blk = n.maps[uz(D.new_arrow.at({k, nu, x}))];
                }
                m.maps[uz(k)].set_block(o.off[uz(ar.t)][ri], o.off[uz(ar.s)][ci], blk);
            }
    }
    return m;
}

Morphism AdmissibleReduction::apply(const Rep& n, const Rep& n2, const Morphism& f) const {
    const Dit& a = *src_;
    const AdmissibleData& D = *data_;
    Rep m = apply(n), m2 = apply(n2);
    Offsets o1 = offsets(D, n), o2 = offsets(D, n2);
    Morphism g = zero_morphism(a, m, m2);
    auto tp = [&](int b) { return D.summands[uz(D.basis[uz(b)].summand)].target_point; };
    for (int p = 0; p < a.npoints(); ++p) {
        const auto& at = D.basis_at[uz(p)];
        std::map<int, std::size_t> pos;
        for (std::size_t i = 0; i < at.size(); ++i) pos[at[i]] = i;
        for (std::size_t ci = 0; ci < at.size(); ++ci) {
            int x = at[ci];
            g.f0[uz(p)].add_block(o2.off[uz(p)][ci], o1.off[uz(p)][ci], f.f0[uz(tp(x))]);
            for (std::size_t j = 0; j < D.P.size(); ++j)
                for (const auto& [l, c] : D.apply_p(static_cast<int>(j), x))
                    g.f0[uz(p)].add_block(o2.off[uz(p)][pos.at(l)], o1.off[uz(p)][ci],
                                          f.f1[uz(D.P[j].gamma_arrow)] * c);
        }
    }
    for (int k = 0; k < a.narrows(); ++k) {
        const Arrow& ar = a.layer.arrow(k);
        if (!ar.dashed) continue;
        const auto& src_at = D.basis_at[uz(ar.s)];
        const auto& tgt_at = D.basis_at[uz(ar.t)];
        for (std::size_t ci = 0; ci < src_at.size(); ++ci)
            for (std::size_t ri = 0; ri < tgt_at.size(); ++ri)
                g.f1[uz(k)].set_block(o2.off[uz(ar.t)][ri], o1.off[uz(ar.s)][ci],
                                      f.f1[uz(D.new_arrow.at({k, tgt_at[ri], src_at[ci]}))]);
    }
    return g;
}

namespace {

std::string basis_label(const AdmissibleData& D, int m) {
    const auto& x = D.basis[uz(m)];
    const auto& sm = D.summands[uz(x.summand)];
    std::size_t here = 0;
    for (int l : D.basis_at[uz(x.point)])
        if (D.basis[uz(l)].summand == x.summand) ++here;
    return here > 1 ? sm.label + ":" + std::to_string(x.index) : sm.label;
}

}  // namespace

ReductionPtr reduce_admissible(std::shared_ptr<const Dit> d, const AdmissibleSpec& spec) {
    const Dit& a = *d;
    const Field& F = a.field();
    auto data = std::make_shared<AdmissibleData>();
    AdmissibleData& D = *data;

    // B: the points with the selected solid arrows.
    std::set<int> bset;
    Bigraph bg;
    for (int p = 0; p < a.npoints(); ++p) bg.add_point(a.layer.point(p).name, a.layer.point(p).factor);
    for (const auto& n : spec.b_arrows) {
        int k = arrow_by_name(a, n);
        const Arrow& ar = a.layer.arrow(k);
        if (ar.dashed) throw ReductionError("B arrows must be solid");
        if (!a.delta[uz(k)].is_zero()) throw ReductionError("δ(" + n + ") is not zero");
        bset.insert(k);
        bg.add_arrow(ar.name, ar.s, ar.t, false);
    }
    D.b_dit = std::make_shared<Dit>(Layer(F, bg));
    const Dit& B = *D.b_dit;

    std::set<int> covered;
    for (int k : bset) {
        covered.insert(a.layer.arrow(k).s);
        covered.insert(a.layer.arrow(k).t);
    }
    for (const auto& f : spec.fin) {
        AdmissibleData::Summand sm;
        sm.label = f.label;
        sm.fin = true;
        sm.module = from_named(B, f.module);
        std::string why;
        if (!is_valid_rep(B, *sm.module, &why)) throw ReductionError("summand " + f.label + ": " + why);
        if (sm.module->total_dim() == 0) throw ReductionError("summand " + f.label + " is zero");
        EndAlgebra E(B, *sm.module);
        if (E.dim() - E.radical().cols() != 1) throw ReductionError("End(" + f.label + ")/rad is not the ground field");
        for (int p = 0; p < a.npoints(); ++p)
            if (sm.module->dims[uz(p)] > 0) covered.insert(p);
        D.summands.push_back(std::move(sm));
    }
    std::set<int> loc_points;
    for (const auto& l : spec.loc) {
        AdmissibleData::Summand sm;
        sm.label = l.label;
        sm.fin = false;
        sm.point = point_by_name(a, l.point);
        sm.inverted = l.inverted;
        if (!a.layer.rational(sm.point) && !l.inverted.empty())
            throw ReductionError("cannot localize the trivial point " + l.point);
        loc_points.insert(sm.point);
        D.summands.push_back(std::move(sm));
    }
    for (int p = 0; p < a.npoints(); ++p)
        if (!covered.count(p) && !loc_points.count(p)) {
            AdmissibleData::Summand sm;
            sm.label = a.layer.point(p).name;
            sm.fin = false;
            sm.point = p;
            D.summands.push_back(std::move(sm));
        }
    for (std::size_t i = 0; i < spec.fin.size(); ++i)
        for (std::size_t j = i + 1; j < spec.fin.size(); ++j)
            if (iso_test(B, *D.summands[i].module, *D.summands[j].module))
                throw ReductionError("summands " + spec.fin[i].label + " and " + spec.fin[j].label + " are isomorphic");

    // Target points.
    Bigraph tg;
    std::set<std::string> used_points;
    for (auto& sm : D.summands) {
        Factor fac = Factor::trivial();
        if (!sm.fin && a.layer.rational(sm.point)) {
            std::vector<Poly> inv = a.layer.point(sm.point).factor.inverted;
            inv.insert(inv.end(), sm.inverted.begin(), sm.inverted.end());
            fac = inv.empty() ? Factor::polynomial_ring() : Factor::localized(inv);
        }
        sm.label = unique_name(sm.label, used_points);
        sm.target_point = tg.add_point(sm.label, fac);
    }
    // Bases.
    D.basis_at.assign(uz(a.npoints()), {});
    for (int s = 0; s < static_cast<int>(D.summands.size()); ++s) {
        const auto& sm = D.summands[uz(s)];
        for (int p = 0; p < a.npoints(); ++p) {
            std::size_t n = sm.fin ? sm.module->dims[uz(p)] : (sm.point == p ? 1 : 0);
            for (std::size_t i = 0; i < n; ++i) {
                D.basis_at[uz(p)].push_back(static_cast<int>(D.basis.size()));
                D.basis.push_back({s, p, i});
            }
        }
        D.c_X = std::max(D.c_X, sm.fin ? sm.module->total_dim() : std::size_t{1});
    }
    // Radical part P between finite summands.
    for (int s = 0; s < static_cast<int>(D.summands.size()); ++s)
        for (int t = 0; t < static_cast<int>(D.summands.size()); ++t) {
            const auto& ss = D.summands[uz(s)];
            const auto& st = D.summands[uz(t)];
            if (!ss.fin || !st.fin) continue;
            std::vector<Morphism> basis;
            if (s != t) {
                basis = hom(B, *ss.module, *st.module);
            } else {
                EndAlgebra E(B, *ss.module);
                for (std::size_t c = 0; c < E.radical().cols(); ++c) basis.push_back(E.element(E.radical().col(c)));
            }
            for (auto& f : basis) D.P.push_back({s, t, f.f0, -1});
        }
    std::size_t np = D.P.size();
    D.structure.assign(np, std::vector<std::vector<Scalar>>(np, std::vector<Scalar>(np, F.zero())));
    for (std::size_t k = 0; k < np; ++k)
        for (std::size_t j = 0; j < np; ++j) {
            if (D.P[j].to != D.P[k].from) continue;
            std::vector<Matrix> comp;
            for (int p = 0; p < a.npoints(); ++p) comp.push_back(D.P[k].f0[uz(p)] * D.P[j].f0[uz(p)]);
            std::vector<Matrix> empty(uz(B.narrows()), Matrix(F, 0, 0));
            Matrix target = flatten(Morphism{comp, empty}, F);
            if (target.is_zero()) continue;
            std::vector<std::size_t> same;
            for (std::size_t l = 0; l < np; ++l)
                if (D.P[l].from == D.P[j].from && D.P[l].to == D.P[k].to) same.push_back(l);
            Matrix cols(F, target.rows(), same.size());
            for (std::size_t c = 0; c < same.size(); ++c) cols.set_block(0, c, flatten(Morphism{D.P[same[c]].f0, empty}, F));
            auto coords = SpanCoordinates(cols).coords(target);
            if (!coords) throw ReductionError("the radical part is not closed under composition");
            for (std::size_t c = 0; c < same.size(); ++c) D.structure[same[c]][k][j] = (*coords)(c, 0);
        }

    // Target arrows [ν a x] and the dashed duals γ_j of P.
    std::set<std::string> used_arrows;
    for (int k = 0; k < a.narrows(); ++k)
        if (!bset.count(k)) {
            const Arrow& ar = a.layer.arrow(k);
            const auto& xs = D.basis_at[uz(ar.s)];
            const auto& ns = D.basis_at[uz(ar.t)];
            for (int x : xs)
                for (int nu : ns) {
                    std::string name = ar.name;
                    if (xs.size() * ns.size() > 1) name += "{" + basis_label(D, nu) + "|" + basis_label(D, x) + "}";
                    int sx = D.summands[uz(D.basis[uz(x)].summand)].target_point;
                    int sn = D.summands[uz(D.basis[uz(nu)].summand)].target_point;
                    D.new_arrow[{k, nu, x}] = tg.add_arrow(unique_name(name, used_arrows), sx, sn, ar.dashed);
                }
        }
    std::map<std::pair<int, int>, int> pair_count;
    for (const auto& p : D.P) pair_count[{p.from, p.to}]++;
    std::map<std::pair<int, int>, int> pair_seen;
    for (auto& p : D.P) {
        const auto& sf = D.summands[uz(p.from)];
        const auto& st = D.summands[uz(p.to)];
        std::string name = "g{" + st.label + "|" + sf.label + "}";
        int idx = pair_seen[{p.from, p.to}]++;
        if (pair_count[{p.from, p.to}] > 1) name += ":" + std::to_string(idx);
        p.gamma_arrow = tg.add_arrow(unique_name(name, used_arrows), sf.target_point, st.target_point, true);
    }

    auto t = std::make_shared<Dit>(Layer(F, tg));
    const Layer& TL = t->layer;
    SigmaEngine sig(a, *t, D);
    for (const auto& [key, na] : D.new_arrow) {
        auto [k, nu, x] = key;
        const Arrow& ar = a.layer.arrow(k);
        TensorElement v = sig.sigma(a.delta[uz(k)], nu, x);
        Scalar sign = ar.dashed ? F.one() : -F.one();
        for (std::size_t j = 0; j < np; ++j)
            for (const auto& [l, c] : D.apply_p(static_cast<int>(j), x))
                v += multiply(TL, arrow_el(TL, D.new_arrow.at({k, nu, l})), arrow_el(TL, D.P[j].gamma_arrow)) *
                     (sign * c);
        for (std::size_t j = 0; j < np; ++j) {
            if (D.P[j].to != D.basis[uz(nu)].summand) continue;
            for (int xi : D.basis_at[uz(ar.t)])
                for (const auto& [l, c] : D.apply_p(static_cast<int>(j), xi))
                    if (l == nu)
                        v += multiply(TL, arrow_el(TL, D.P[j].gamma_arrow), arrow_el(TL, D.new_arrow.at({k, xi, x}))) * c;
        }
        t->delta[uz(na)] = v;
    }
    for (std::size_t l = 0; l < np; ++l) {
        TensorElement v;
        for (std::size_t k = 0; k < np; ++k)
            for (std::size_t j = 0; j < np; ++j)
                if (!D.structure[l][k][j].is_zero())
                    v += multiply(TL, arrow_el(TL, D.P[k].gamma_arrow), arrow_el(TL, D.P[j].gamma_arrow)) *
                         D.structure[l][k][j];
        t->delta[uz(D.P[l].gamma_arrow)] = v;
    }
    std::vector<TensorElement> gens;
    for (const auto& h : a.ideal) {
        auto ep = endpoints(a.layer, h);
        if (!ep) continue;
        for (int x : D.basis_at[uz(ep->src)])
            for (int nu : D.basis_at[uz(ep->tgt)]) {
                TensorElement s = sig.sigma(h, nu, x);
                if (!s.is_zero()) gens.push_back(s);
            }
    }
    t->ideal = normalize_ideal(TL, gens);
    Step s{StepKind::admissible, {}, {}, {}, std::nullopt, spec};
    return std::make_shared<AdmissibleReduction>(s, d, t, data);
}

AdmissibleSpec edge_spec(const Dit& d, const std::string& alpha) {
    int k = arrow_by_name(d, alpha);
    const Arrow& ar = d.layer.arrow(k);
    if (ar.dashed || ar.s == ar.t) throw ReductionError("edge reduction needs a solid arrow between two points");
    if (d.layer.rational(ar.s) || d.layer.rational(ar.t)) throw ReductionError("edge reduction needs trivial points");
    const std::string& s = d.layer.point(ar.s).name;
    const std::string& t = d.layer.point(ar.t).name;
    AdmissibleSpec spec;
    spec.b_arrows = {alpha};
    Field F = d.field();
    auto simple = [&](const std::string& p) {
        NamedModule m;
        m.dims[p] = 1;
        m.maps.insert_or_assign(alpha, Matrix(F, p == t ? 1 : 0, p == s ? 1 : 0));
        return m;
    };
    NamedModule pa;
    pa.dims[s] = 1;
    pa.dims[t] = 1;
    pa.maps.insert_or_assign(alpha, Matrix::identity(F, 1));
    spec.fin = {{s, simple(s)}, {t, simple(t)}, {alpha, pa}};
    return spec;
}

AdmissibleSpec kill_spec(const Dit& d, const std::string& alpha) {
    int k = arrow_by_name(d, alpha);
    const Arrow& ar = d.layer.arrow(k);
    if (ar.dashed || ar.s == ar.t) throw ReductionError("kill needs a solid arrow between two points");
    AdmissibleSpec spec;
    spec.b_arrows = {alpha};
    Field F = d.field();
    for (int p : {ar.s, ar.t}) {
        const std::string& name = d.layer.point(p).name;
        if (d.layer.rational(p)) {
            spec.loc.push_back({name, name, {}});
            continue;
        }
        NamedModule m;
        m.dims[name] = 1;
        m.maps.insert_or_assign(alpha, Matrix(F, p == ar.t ? 1 : 0, p == ar.s ? 1 : 0));
        spec.fin.push_back({name, m});
    }
    return spec;
}

// ---------------------------------------------------------------- composites

CompositeReduction::CompositeReduction(std::shared_ptr<const Dit> src, std::vector<ReductionPtr> children)
    : Reduction(Step{StepKind::composite, {}, {}, {}, std::nullopt, std::nullopt}, src,
                children.empty() ? src : children.back()->target_ptr()),
      children_(std::move(children)) {
    const Dit* cur = src_.get();
    for (const auto& c : children_) {
        if (&c->source() != cur) throw ReductionError("composite steps do not chain");
        cur = &c->target();
    }
}

Rep CompositeReduction::apply(const Rep& n) const {
    Rep cur = n;
    for (auto it = children_.rbegin(); it != children_.rend(); ++it) cur = (*it)->apply(cur);
    return cur;
}

Morphism CompositeReduction::apply(const Rep& n, const Rep& n2, const Morphism& f) const {
    Rep a = n, b = n2;
    Morphism g = f;
    for (auto it = children_.rbegin(); it != children_.rend(); ++it) {
        g = (*it)->apply(a, b, g);
        a = (*it)->apply(a);
        b = (*it)->apply(b);
    }
    return g;
}

std::size_t CompositeReduction::dim_factor() const {
    std::size_t c = 1;
    for (const auto& s : children_) c *= s->dim_factor();
    return c;
}

std::vector<std::size_t> CompositeReduction::target_weights(const std::vector<std::size_t>& w) const {
    std::vector<std::size_t> cur = w;
    for (const auto& s : children_) cur = s->target_weights(cur);
    return cur;
}

ReductionPtr compose_reductions(std::shared_ptr<const Dit> d, std::vector<ReductionPtr> steps) {
    return std::make_shared<CompositeReduction>(std::move(d), std::move(steps));
}

ReductionPtr make_reduction(std::shared_ptr<const Dit> d, const Step& s) {
    switch (s.kind) {
        case StepKind::deletion: return delete_points(d, s.points);
        case StepKind::regularization:
            if (s.arrows.size() != 2) throw ReductionError("regularization names two arrows");
            return regularize(d, s.arrows[0], s.arrows[1]);
        case StepKind::factor_out: return factor_out(d, s.arrows);
        case StepKind::absorption:
            if (s.arrows.size() != 1) throw ReductionError("absorption names one loop");
            return absorb(d, s.arrows[0]);
        case StepKind::basechange:
            if (!s.matrix) throw ReductionError("basechange needs a matrix");
            return basechange(d, s.arrows, s.new_names, *s.matrix);
        case StepKind::admissible:
            if (!s.admissible) throw ReductionError("admissible step without data");
            return reduce_admissible(d, *s.admissible);
        case StepKind::composite: break;
    }
    throw ReductionError("composite steps cannot be replayed directly");
}

ReductionPtr replay(std::shared_ptr<const Dit> d, const std::vector<Step>& steps) {
    std::vector<ReductionPtr> out;
    std::shared_ptr<const Dit> cur = d;
    for (const auto& s : steps) {
        out.push_back(make_reduction(cur, s));
        cur = out.back()->target_ptr();
    }
    return compose_reductions(d, out);
}

// ---------------------------------------------------------------- detachment

std::shared_ptr<const Dit> detach(const Dit& d, const std::string& e0) {
    int p0 = point_by_name(d, e0);
    if (!is_source(d, p0)) throw ReductionError(e0 + " is not a source");
    for (const auto& h : d.ideal) {
        auto ep = endpoints(d.layer, h);
        if (ep && ep->src == p0 && ep->tgt == p0) throw ReductionError(e0 + " lies in the ideal");
    }
    Bigraph g;
    for (int p = 0; p < d.npoints(); ++p) g.add_point(d.layer.point(p).name, d.layer.point(p).factor);
    std::vector<int> pm(uz(d.npoints()));
    for (int p = 0; p < d.npoints(); ++p) pm[uz(p)] = p;
    std::vector<int> am(uz(d.narrows()), -1);
    for (int k = 0; k < d.narrows(); ++k) {
        const Arrow& ar = d.layer.arrow(k);
        if (ar.s != p0) am[uz(k)] = g.add_arrow(ar.name, ar.s, ar.t, ar.dashed);
    }
    auto t = std::make_shared<Dit>(Layer(d.field(), g));
    std::vector<TensorElement> img(uz(d.narrows()));
    for (int k = 0; k < d.narrows(); ++k)
        if (am[uz(k)] >= 0) img[uz(k)] = arrow_el(t->layer, am[uz(k)]);
    for (int k = 0; k < d.narrows(); ++k)
        if (am[uz(k)] >= 0) t->delta[uz(am[uz(k)])] = phi_map(d.layer, t->layer, pm, img, d.delta[uz(k)]);
    std::vector<TensorElement> keep;
    for (const auto& h : d.ideal) {
        auto ep = endpoints(d.layer, h);
        if (ep && ep->src != p0) keep.push_back(phi_map(d.layer, t->layer, pm, img, h));
    }
    t->ideal = normalize_ideal(t->layer, keep);
    return t;
}

Rep restrict_detached(const Dit& d, const Dit& detached, const std::string& e0, const Rep& m) {
    int p0 = point_by_name(d, e0);
    NamedModule nm = to_named(d, m);
    nm.dims[d.layer.point(p0).name] = 0;
    for (int k = 0; k < d.narrows(); ++k)
        if (d.layer.arrow(k).s == p0) nm.maps.erase(d.layer.arrow(k).name);
    if (d.layer.rational(p0)) nm.X.insert_or_assign(e0, Matrix(m.field, 0, 0));
    Rep r = from_named(detached, nm);
    // from_named uses the ground field; keep the module's own field.
    Rep out = zero_rep(detached, m.field, r.dims);
    for (int p = 0; p < detached.npoints(); ++p)
        if (p != p0) out.X[uz(p)] = m.X[uz(p)];
    for (int k = 0; k < detached.narrows(); ++k) {
        const Arrow& ar = detached.layer.arrow(k);
        if (!ar.dashed) out.maps[uz(k)] = m.maps[uz(d.arrow(ar.name))];
    }
    return out;
}

// ---------------------------------------------------------------- families

Rep generic_module(const Dit& d, const std::string& point) {
    int p = point_by_name(d, point);
    if (!d.layer.rational(p)) throw ReductionError(point + " is not a rational point");
    Field K = Field::function_field(d.field());
    std::vector<std::size_t> dims(uz(d.npoints()), 0);
    dims[uz(p)] = 1;
    Rep r = zero_rep(d, K, dims);
    r.X[uz(p)](0, 0) = K.variable();
    return r;
}

Rep evaluate_functor_on_bimodule(const Reduction& f, const std::string& point) {
    return f.apply(generic_module(f.target(), point));
}

}  // namespace ditalg
