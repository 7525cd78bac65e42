#include "ditalg/modcat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace ditalg {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

Matrix vec(const Matrix& a) {
    Matrix v(a.field(), a.rows() * a.cols(), 1);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) v(j * a.rows() + i, 0) = a(i, j);
    return v;
}

Matrix unvec(const Matrix& v, std::size_t off, std::size_t rows, std::size_t cols) {
    Matrix a(v.field(), rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v(off + j * rows + i, 0);
    return a;
}

Matrix coerced(const Field& F, const Matrix& a) { return a.field() == F ? a : a.in_field(F); }

// Portion of w after position k, starting at the target of arrows[k].
Word left_part(const Layer& L, const Word& w, std::size_t k) {
    Word r;
    r.src = L.arrow(w.arrows[k]).t;
    r.arrows.assign(w.arrows.begin() + static_cast<long>(k) + 1, w.arrows.end());
    r.decos.assign(w.decos.begin() + static_cast<long>(k) + 1, w.decos.end());
    return r;
}

// Portion of w before position k.
Word right_part(const Word& w, std::size_t k) {
    Word r;
    r.src = w.src;
    r.arrows.assign(w.arrows.begin(), w.arrows.begin() + static_cast<long>(k));
    r.decos.assign(w.decos.begin(), w.decos.begin() + static_cast<long>(k) + 1);
    return r;
}

// Portion strictly between positions k1 < k2.
Word mid_part(const Layer& L, const Word& w, std::size_t k1, std::size_t k2) {
    Word r;
    r.src = L.arrow(w.arrows[k1]).t;
    r.arrows.assign(w.arrows.begin() + static_cast<long>(k1) + 1, w.arrows.begin() + static_cast<long>(k2));
    r.decos.assign(w.decos.begin() + static_cast<long>(k1) + 1, w.decos.begin() + static_cast<long>(k2) + 1);
    return r;
}

std::vector<std::size_t> dashed_positions(const Layer& L, const Word& w) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < w.arrows.size(); ++k)
        if (L.dashed(w.arrows[k])) out.push_back(k);
    return out;
}

// Linear system assembled block by block over a fixed set of unknowns.
class Equations {
public:
    Equations(Field f, std::size_t n) : F_(std::move(f)), n_(n) {}
    // Adds rows whose coefficient blocks sit at the given column offsets.
    void add(std::size_t rows, const std::vector<std::pair<std::size_t, Matrix>>& blocks,
             const std::optional<Matrix>& rhs = std::nullopt) {
        if (rows == 0) return;
        Matrix m(F_, rows, n_);
        for (const auto& [off, b] : blocks)
            if (!b.empty()) m.add_block(0, off, coerced(F_, b));
        rows_.push_back(std::move(m));
        rhs_.push_back(rhs ? coerced(F_, *rhs) : Matrix(F_, rows, 1));
    }
    Matrix matrix() const { return stack(rows_, n_); }
    Matrix rhs() const { return stack(rhs_, 1); }

private:
    Matrix stack(const std::vector<Matrix>& parts, std::size_t cols) const {
        std::size_t total = 0;
        for (const auto& p : parts) total += p.rows();
        Matrix out(F_, total, cols);
        std::size_t r = 0;
        for (const auto& p : parts) {
            out.set_block(r, 0, p);
            r += p.rows();
        }
        return out;
    }
    Field F_;
    std::size_t n_;
    std::vector<Matrix> rows_, rhs_;
};

struct Layout {
    std::vector<std::size_t> off0, off1;
    std::size_t total = 0;
};

Layout morphism_layout(const Dit& d, const Rep& m, const Rep& n) {
    Layout lay;
    lay.off0.resize(uz(d.npoints()));
    lay.off1.assign(uz(d.narrows()), 0);
    for (int p = 0; p < d.npoints(); ++p) {
        lay.off0[uz(p)] = lay.total;
        lay.total += n.dims[uz(p)] * m.dims[uz(p)];
    }
    for (int a = 0; a < d.narrows(); ++a) {
        if (!d.layer.dashed(a)) continue;
        const Arrow& ar = d.layer.arrow(a);
        lay.off1[uz(a)] = lay.total;
        lay.total += n.dims[uz(ar.t)] * m.dims[uz(ar.s)];
    }
    return lay;
}

Morphism unflatten(const Dit& d, const Rep& m, const Rep& n, const Layout& lay, const Matrix& v) {
    const Field& F = m.field;
    Morphism f;
    for (int p = 0; p < d.npoints(); ++p)
        f.f0.push_back(unvec(v, lay.off0[uz(p)], n.dims[uz(p)], m.dims[uz(p)]));
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = d.layer.arrow(a);
        f.f1.push_back(ar.dashed ? unvec(v, lay.off1[uz(a)], n.dims[uz(ar.t)], m.dims[uz(ar.s)]) : Matrix(F, 0, 0));
    }
    return f;
}

Rep sum_of(const Dit& d, const Field& F, const std::vector<Rep>& parts) {
    Rep acc = zero_rep(d, F, std::vector<std::size_t>(uz(d.npoints()), 0));
    for (const auto& p : parts) acc = direct_sum(acc, p);
    return acc;
}

Scalar random_scalar(const Field& F, std::mt19937_64& rng) {
    if (F.is_prime()) return F(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(F.characteristic())));
    if (F.is_rational()) return F(static_cast<std::int64_t>(rng() % 11) - 5);
    throw ArithmeticError("random elements over " + F.name() + " are not supported");
}

Matrix block_diag_f0(const Field& F, const Morphism& f) {
    Matrix acc(F, 0, 0);
    for (const auto& b : f.f0) acc = direct_sum(acc, coerced(F, b));
    return acc;
}

}  // namespace

std::size_t Rep::total_dim() const {
    std::size_t s = 0;
    for (auto v : dims) s += v;
    return s;
}

bool Rep::operator==(const Rep& o) const { return field == o.field && dims == o.dims && X == o.X && maps == o.maps; }

Rep zero_rep(const Dit& d, const Field& f, std::vector<std::size_t> dims) {
    if (dims.size() != uz(d.npoints())) throw std::invalid_argument("one dimension per point is required");
    Rep r{f, std::move(dims), {}, {}};
    for (int p = 0; p < d.npoints(); ++p) r.X.emplace_back(f, r.dims[uz(p)], r.dims[uz(p)]);
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = d.layer.arrow(a);
        if (ar.dashed)
            r.maps.emplace_back(f, 0, 0);
        else
            r.maps.emplace_back(f, r.dims[uz(ar.t)], r.dims[uz(ar.s)]);
    }
    return r;
}

Rep simple_rep(const Dit& d, int point, const Scalar& lambda) {
    std::vector<std::size_t> dims(uz(d.npoints()), 0);
    dims[uz(point)] = 1;
    Rep r = zero_rep(d, d.field(), dims);
    if (d.layer.rational(point)) r.X[uz(point)](0, 0) = d.field().coerce(lambda);
    return r;
}

Rep direct_sum(const Rep& a, const Rep& b) {
    if (a.dims.size() != b.dims.size() || a.maps.size() != b.maps.size())
        throw std::invalid_argument("direct sum of modules over different ditalgebras");
    Rep r{a.field, {}, {}, {}};
    for (std::size_t p = 0; p < a.dims.size(); ++p) {
        r.dims.push_back(a.dims[p] + b.dims[p]);
        r.X.push_back(direct_sum(a.X[p], b.X[p]));
    }
    for (std::size_t k = 0; k < a.maps.size(); ++k) r.maps.push_back(direct_sum(a.maps[k], b.maps[k]));
    return r;
}

Rep specialize(const Rep& m, const Field& base, const Scalar& lambda) {
    auto spec = [&](const Matrix& a) {
        Matrix r(base, a.rows(), a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                const Scalar& s = a(i, j);
                r(i, j) = (!s.is_loose() && s.field().is_function()) ? s.ratfun().eval(lambda) : base.coerce(s);
            }
        return r;
    };
    Rep r{base, m.dims, {}, {}};
    for (const auto& x : m.X) r.X.push_back(spec(x));
    for (const auto& x : m.maps) r.maps.push_back(spec(x));
    return r;
}

Matrix act_deco(const Dit& d, const Rep& m, int point, const Deco& c) {
    std::size_t n = m.dims[uz(point)];
    if (!d.layer.rational(point)) {
        if (!c.is_unit_deco()) throw std::invalid_argument("decoration at a trivial point");
        return Matrix::identity(m.field, n);
    }
    return coerced(m.field, d.layer.ring(point).act(c, m.X[uz(point)]));
}

Matrix act_word(const Dit& d, const Rep& m, const Word& w) {
    Matrix cur = act_deco(d, m, w.src, w.decos[0]);
    for (std::size_t k = 0; k < w.arrows.size(); ++k) {
        int a = w.arrows[k];
        if (d.layer.dashed(a)) throw std::invalid_argument("dashed arrow in a word of degree 0");
        cur = m.maps[uz(a)] * cur;
        cur = act_deco(d, m, d.layer.arrow(a).t, w.decos[k + 1]) * cur;
    }
    return coerced(m.field, cur);
}

Matrix act(const Dit& d, const Rep& m, const TensorElement& e, int i, int j) {
    Matrix out(m.field, m.dims[uz(j)], m.dims[uz(i)]);
    TensorElement part = e.between(d.layer, i, j);
    for (const auto& [w, c] : part.terms()) out += act_word(d, m, w) * m.field.coerce(c);
    return out;
}

bool is_valid_rep(const Dit& d, const Rep& m, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    const Layer& L = d.layer;
    if (m.dims.size() != uz(d.npoints()) || m.X.size() != uz(d.npoints()) || m.maps.size() != uz(d.narrows()))
        return fail("module has the wrong number of points or arrows");
    for (int p = 0; p < d.npoints(); ++p) {
        const Matrix& x = m.X[uz(p)];
        if (x.rows() != m.dims[uz(p)] || x.cols() != m.dims[uz(p)])
            return fail("X at " + L.point(p).name + " has the wrong shape");
        if (L.rational(p) && !L.ring(p).admissible_operator(x))
            return fail("an inverted polynomial is singular at " + L.point(p).name);
    }
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        const Matrix& x = m.maps[uz(a)];
        if (ar.dashed) continue;
        if (x.rows() != m.dims[uz(ar.t)] || x.cols() != m.dims[uz(ar.s)])
            return fail("map of " + ar.name + " has the wrong shape");
    }
    for (const auto& h : d.ideal) {
        auto ep = endpoints(L, h);
        if (!ep) continue;
        if (!act(d, m, h, ep->src, ep->tgt).is_zero()) return fail("ideal generator " + h.to_string(L) + " acts nontrivially");
    }
    return true;
}

void validate_rep(const Dit& d, const Rep& m) {
    std::string why;
    if (!is_valid_rep(d, m, &why)) throw std::invalid_argument(why);
}

bool Morphism::operator==(const Morphism& o) const { return f0 == o.f0 && f1 == o.f1; }

Morphism identity_morphism(const Dit& d, const Rep& m) {
    Morphism f = zero_morphism(d, m, m);
    for (int p = 0; p < d.npoints(); ++p) f.f0[uz(p)] = Matrix::identity(m.field, m.dims[uz(p)]);
    return f;
}

Morphism zero_morphism(const Dit& d, const Rep& m, const Rep& n) {
    Morphism f;
    for (int p = 0; p < d.npoints(); ++p) f.f0.emplace_back(m.field, n.dims[uz(p)], m.dims[uz(p)]);
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = d.layer.arrow(a);
        if (ar.dashed)
            f.f1.emplace_back(m.field, n.dims[uz(ar.t)], m.dims[uz(ar.s)]);
        else
            f.f1.emplace_back(m.field, 0, 0);
    }
    return f;
}

Morphism operator+(const Morphism& a, const Morphism& b) {
    Morphism r = a;
    for (std::size_t k = 0; k < r.f0.size(); ++k) r.f0[k] += b.f0[k];
    for (std::size_t k = 0; k < r.f1.size(); ++k) r.f1[k] += b.f1[k];
    return r;
}

Morphism scale(const Morphism& a, const Scalar& s) {
    Morphism r = a;
    for (auto& x : r.f0) x = x * s;
    for (auto& x : r.f1) x = x * s;
    return r;
}

Morphism direct_sum(const Morphism& a, const Morphism& b) {
    Morphism r;
    for (std::size_t k = 0; k < a.f0.size(); ++k) r.f0.push_back(direct_sum(a.f0[k], b.f0[k]));
    for (std::size_t k = 0; k < a.f1.size(); ++k) r.f1.push_back(direct_sum(a.f1[k], b.f1[k]));
    return r;
}

Matrix eval_f1(const Dit& d, const Rep& m, const Rep& n, const Morphism& f, const TensorElement& v, int i, int j) {
    const Layer& L = d.layer;
    Matrix out(m.field, n.dims[uz(j)], m.dims[uz(i)]);
    TensorElement part = v.between(L, i, j);
    for (const auto& [w, c] : part.terms()) {
        auto pos = dashed_positions(L, w);
        if (pos.size() != 1) throw std::invalid_argument("eval_f1 expects an element of degree 1");
        std::size_t k = pos[0];
        out += act_word(d, n, left_part(L, w, k)) * f.f1[uz(w.arrows[k])] * act_word(d, m, right_part(w, k)) *
               m.field.coerce(c);
    }
    return out;
}

Matrix eval_star(const Dit& d, const Rep& m, const Rep& n, const Rep& l, const Morphism& g, const Morphism& f,
                 const TensorElement& w, int i, int j) {
    const Layer& L = d.layer;
    Matrix out(m.field, l.dims[uz(j)], m.dims[uz(i)]);
    TensorElement part = w.between(L, i, j);
    for (const auto& [word, c] : part.terms()) {
        auto pos = dashed_positions(L, word);
        if (pos.size() != 2) throw std::invalid_argument("eval_star expects an element of degree 2");
        std::size_t k1 = pos[0], k2 = pos[1];
        out += act_word(d, l, left_part(L, word, k2)) * g.f1[uz(word.arrows[k2])] *
               act_word(d, n, mid_part(L, word, k1, k2)) * f.f1[uz(word.arrows[k1])] *
               act_word(d, m, right_part(word, k1)) * m.field.coerce(c);
    }
    return out;
}

bool is_morphism(const Dit& d, const Rep& m, const Rep& n, const Morphism& f) {
    const Layer& L = d.layer;
    if (f.f0.size() != uz(d.npoints()) || f.f1.size() != uz(d.narrows())) return false;
    for (int p = 0; p < d.npoints(); ++p) {
        const Matrix& x = f.f0[uz(p)];
        if (x.rows() != n.dims[uz(p)] || x.cols() != m.dims[uz(p)]) return false;
        if (L.rational(p) && n.X[uz(p)] * x != x * m.X[uz(p)]) return false;
    }
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        if (ar.dashed) {
            const Matrix& x = f.f1[uz(a)];
            if (x.rows() != n.dims[uz(ar.t)] || x.cols() != m.dims[uz(ar.s)]) return false;
            continue;
        }
        Matrix lhs = n.maps[uz(a)] * f.f0[uz(ar.s)] - f.f0[uz(ar.t)] * m.maps[uz(a)] -
                     eval_f1(d, m, n, f, d.delta[uz(a)], ar.s, ar.t);
        if (!lhs.is_zero()) return false;
    }
    return true;
}

std::vector<Morphism> hom(const Dit& d, const Rep& m, const Rep& n) {
    const Layer& L = d.layer;
    const Field& F = m.field;
    Layout lay = morphism_layout(d, m, n);
    if (lay.total == 0) return {};
    Equations eq(F, lay.total);
    for (int p = 0; p < d.npoints(); ++p) {
        if (!L.rational(p)) continue;
        std::size_t mp = m.dims[uz(p)], np = n.dims[uz(p)];
        Matrix blk = kron(Matrix::identity(F, mp), n.X[uz(p)]) - kron(m.X[uz(p)].transpose(), Matrix::identity(F, np));
        eq.add(np * mp, {{lay.off0[uz(p)], blk}});
    }
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        if (ar.dashed) continue;
        std::size_t ms = m.dims[uz(ar.s)], nt = n.dims[uz(ar.t)];
        std::vector<std::pair<std::size_t, Matrix>> blocks;
        blocks.emplace_back(lay.off0[uz(ar.s)], kron(Matrix::identity(F, ms), n.maps[uz(a)]));
        blocks.emplace_back(lay.off0[uz(ar.t)], -kron(m.maps[uz(a)].transpose(), Matrix::identity(F, nt)));
        for (const auto& [w, c] : d.delta[uz(a)].terms()) {
            auto pos = dashed_positions(L, w);
            std::size_t k = pos.at(0);
            Matrix lm = act_word(d, n, left_part(L, w, k));
            Matrix rm = act_word(d, m, right_part(w, k));
            blocks.emplace_back(lay.off1[uz(w.arrows[k])], -kron(rm.transpose(), lm) * F.coerce(c));
        }
        eq.add(nt * ms, blocks);
    }
    Matrix K = eq.matrix().kernel();
    std::vector<Morphism> out;
    for (std::size_t c = 0; c < K.cols(); ++c) out.push_back(unflatten(d, m, n, lay, K.col(c)));
    return out;
}

std::size_t hom_dim(const Dit& d, const Rep& m, const Rep& n) { return hom(d, m, n).size(); }

Morphism compose(const Dit& d, const Rep& m, const Rep& n, const Rep& l, const Morphism& g, const Morphism& f) {
    const Layer& L = d.layer;
    Morphism r;
    for (int p = 0; p < d.npoints(); ++p) r.f0.push_back(g.f0[uz(p)] * f.f0[uz(p)]);
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        if (!ar.dashed) {
            r.f1.emplace_back(m.field, 0, 0);
            continue;
        }
        Matrix v = g.f0[uz(ar.t)] * f.f1[uz(a)] + g.f1[uz(a)] * f.f0[uz(ar.s)];
        if (!d.delta[uz(a)].is_zero()) v += eval_star(d, m, n, l, g, f, d.delta[uz(a)], ar.s, ar.t);
        r.f1.push_back(coerced(m.field, v));
    }
    return r;
}

bool f0_bijective(const Morphism& f) {
    for (const auto& x : f.f0) {
        if (x.rows() != x.cols()) return false;
        if (x.rows() > 0 && x.rank() != x.rows()) return false;
    }
    return true;
}

std::optional<Morphism> inverse(const Dit& d, const Rep& m, const Rep& n, const Morphism& f) {
    if (!f0_bijective(f)) return std::nullopt;
    const Layer& L = d.layer;
    const Field& F = m.field;
    Morphism g = zero_morphism(d, n, m);
    for (int p = 0; p < d.npoints(); ++p)
        if (m.dims[uz(p)] > 0) g.f0[uz(p)] = *f.f0[uz(p)].inverse();
    // g1 unknowns are laid out as morphisms N -> M.
    Layout lay = morphism_layout(d, n, m);
    std::size_t base = 0;
    for (int p = 0; p < d.npoints(); ++p) base += n.dims[uz(p)] * m.dims[uz(p)];
    std::size_t nunk = lay.total - base;
    if (nunk > 0) {
        Equations eq(F, nunk);
        for (int a = 0; a < d.narrows(); ++a) {
            const Arrow& ar = L.arrow(a);
            if (ar.dashed) {
                // (g f)_1(v) = g0 f1(v) + g1(v) f0 + (g1 * f1)(δv) = 0
                std::size_t rows = m.dims[uz(ar.t)] * m.dims[uz(ar.s)];
                std::vector<std::pair<std::size_t, Matrix>> blocks;
                blocks.emplace_back(lay.off1[uz(a)] - base,
                                    kron(f.f0[uz(ar.s)].transpose(), Matrix::identity(F, m.dims[uz(ar.t)])));
                for (const auto& [w, c] : d.delta[uz(a)].terms()) {
                    auto pos = dashed_positions(L, w);
                    std::size_t k1 = pos.at(0), k2 = pos.at(1);
                    Matrix lm = act_word(d, m, left_part(L, w, k2));
                    Matrix rm = act_word(d, n, mid_part(L, w, k1, k2)) * f.f1[uz(w.arrows[k1])] *
                                act_word(d, m, right_part(w, k1));
                    blocks.emplace_back(lay.off1[uz(w.arrows[k2])] - base, kron(rm.transpose(), lm) * F.coerce(c));
                }
                eq.add(rows, blocks, -vec(g.f0[uz(ar.t)] * f.f1[uz(a)]));
            } else {
                // g ∈ U(N, M): M(a) g0 - g0 N(a) - g1(δa) = 0
                std::size_t rows = m.dims[uz(ar.t)] * n.dims[uz(ar.s)];
                std::vector<std::pair<std::size_t, Matrix>> blocks;
                for (const auto& [w, c] : d.delta[uz(a)].terms()) {
                    std::size_t k = dashed_positions(L, w).at(0);
                    Matrix lm = act_word(d, m, left_part(L, w, k));
                    Matrix rm = act_word(d, n, right_part(w, k));
                    blocks.emplace_back(lay.off1[uz(w.arrows[k])] - base, -kron(rm.transpose(), lm) * F.coerce(c));
                }
                Matrix cst = m.maps[uz(a)] * g.f0[uz(ar.s)] - g.f0[uz(ar.t)] * n.maps[uz(a)];
                eq.add(rows, blocks, -vec(cst));
            }
        }
        LinearSolution sol = solve_linear(eq.matrix(), eq.rhs());
        if (!sol.consistent) throw ArithmeticError("no inverse although f0 is bijective");
        Matrix x = *sol.particular;
        for (int a = 0; a < d.narrows(); ++a) {
            const Arrow& ar = L.arrow(a);
            if (ar.dashed) g.f1[uz(a)] = unvec(x, lay.off1[uz(a)] - base, m.dims[uz(ar.t)], n.dims[uz(ar.s)]);
        }
    }
    if (compose(d, m, n, m, g, f) != identity_morphism(d, m) || compose(d, n, m, n, f, g) != identity_morphism(d, n))
        throw ArithmeticError("inverse failed verification");
    return g;
}

Rep roiter_transport(const Dit& d, const Rep& m, const std::vector<Matrix>& f0, const std::vector<Matrix>& f1) {
    const Layer& L = d.layer;
    auto levels = generator_levels(d);
    if (!levels) throw std::invalid_argument("transport needs a triangular layer");
    std::vector<Matrix> inv;
    for (int p = 0; p < d.npoints(); ++p) {
        if (m.dims[uz(p)] == 0) {
            inv.emplace_back(m.field, 0, 0);
            continue;
        }
        auto i = f0[uz(p)].inverse();
        if (!i) throw ArithmeticError("transport needs f0 bijective");
        inv.push_back(*i);
    }
    Rep r = zero_rep(d, m.field, m.dims);
    for (int p = 0; p < d.npoints(); ++p) r.X[uz(p)] = inv[uz(p)] * m.X[uz(p)] * f0[uz(p)];
    std::vector<int> order;
    for (int a = 0; a < d.narrows(); ++a)
        if (!L.dashed(a)) order.push_back(a);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return (*levels)[uz(a)] < (*levels)[uz(b)]; });
    for (int a : order) {
        const Arrow& ar = L.arrow(a);
        Matrix acc = m.maps[uz(a)] * f0[uz(ar.s)];
        for (const auto& [w, c] : d.delta[uz(a)].terms()) {
            std::size_t k = dashed_positions(L, w).at(0);
            acc = acc - act_word(d, m, left_part(L, w, k)) * f1[uz(w.arrows[k])] * act_word(d, r, right_part(w, k)) *
                   m.field.coerce(c);
        }
        r.maps[uz(a)] = coerced(m.field, inv[uz(ar.t)] * acc);
    }
    return r;
}

Matrix flatten(const Morphism& f, const Field& F) {
    std::vector<Matrix> parts;
    for (const auto& x : f.f0) parts.push_back(vec(x));
    for (const auto& x : f.f1)
        if (!x.empty()) parts.push_back(vec(x));
    std::size_t total = 0;
    for (const auto& p : parts) total += p.rows();
    Matrix out(F, total, 1);
    std::size_t r = 0;
    for (const auto& p : parts) {
        out.set_block(r, 0, coerced(F, p));
        r += p.rows();
    }
    return out;
}

EndAlgebra::EndAlgebra(const Dit& d, const Rep& m)
    : d_(d), m_(m), basis_(hom(d, m, m)), radical_(m.field, basis_.size(), 0) {
    const Field& F = m_.field;
    Matrix B(F, flatten(identity_morphism(d_, m_), F).rows(), basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k) B.set_block(0, k, flatten(basis_[k], F));
    span_.emplace(B);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        Matrix Lk(F, basis_.size(), basis_.size());
        for (std::size_t j = 0; j < basis_.size(); ++j)
            Lk.set_block(0, j, coords(compose(d_, m_, m_, m_, basis_[k], basis_[j])));
        left_.push_back(std::move(Lk));
    }
    compute_radical();
}

Morphism EndAlgebra::element(const Matrix& c) const {
    Morphism f = zero_morphism(d_, m_, m_);
    for (std::size_t k = 0; k < basis_.size(); ++k)
        if (!c(k, 0).is_zero()) f = f + scale(basis_[k], c(k, 0));
    return f;
}

Matrix EndAlgebra::coords(const Morphism& f) const {
    auto c = span_->coords(flatten(f, m_.field));
    if (!c) throw std::invalid_argument("morphism is not an endomorphism of the module");
    return *c;
}

Matrix EndAlgebra::left_mult(const Matrix& a) const {
    Matrix out(m_.field, basis_.size(), basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k)
        if (!a(k, 0).is_zero()) out += left_[k] * a(k, 0);
    return out;
}

Matrix EndAlgebra::one() const { return coords(identity_morphism(d_, m_)); }

bool EndAlgebra::in_radical(const Matrix& a) const {
    if (radical_.cols() == 0) return a.is_zero();
    return radical_.hstack(a).rank() == radical_.rank();
}

namespace {

using IntMat = std::vector<std::vector<std::int64_t>>;

IntMat int_mul(const IntMat& a, const IntMat& b, std::int64_t mod) {
    std::size_t n = a.size();
    IntMat r(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                r[i][j] = static_cast<std::int64_t>((static_cast<__int128>(a[i][k]) * b[k][j] + r[i][j]) % mod);
        }
    return r;
}

// Cohen-Ivanyos-Wales: radical of a matrix algebra over F_p given by a basis.
// Returns coefficient vectors (columns) spanning the radical.
Matrix radical_prime(const Field& F, const std::vector<Matrix>& basis) {
    std::int64_t p = F.characteristic();
    std::size_t r = basis.size();
    std::size_t n = basis.empty() ? 0 : basis[0].rows();
    Matrix B(F, n * n, r);
    for (std::size_t k = 0; k < r; ++k) B.set_block(0, k, vec(basis[k]));
    SpanCoordinates sc(B);
    int l = 0;
    for (std::int64_t q = p; q <= static_cast<std::int64_t>(n); q *= p) ++l;
    Matrix I = Matrix::identity(F, r);
    std::int64_t pi = 1;
    for (int i = 0; i <= l && I.cols() > 0; ++i, pi *= p) {
        std::int64_t mod = pi * p;
        Matrix G(F, r, I.cols());
        for (std::size_t u = 0; u < I.cols(); ++u) {
            Matrix U(F, n, n);
            for (std::size_t k = 0; k < r; ++k)
                if (!I(k, u).is_zero()) U += basis[k] * I(k, u);
            for (std::size_t j = 0; j < r; ++j) {
                Matrix y = *sc.coords(vec(U * basis[j]));
                IntMat Y(n, std::vector<std::int64_t>(n, 0));
                for (std::size_t k = 0; k < r; ++k) {
                    std::int64_t yk = y(k, 0).residue();
                    if (yk == 0) continue;
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b)
                            Y[a][b] = (Y[a][b] + yk * basis[k](a, b).residue()) % mod;
                }
                IntMat P(n, std::vector<std::int64_t>(n, 0));
                for (std::size_t a = 0; a < n; ++a) P[a][a] = 1 % mod;
                IntMat base = Y;
                for (std::int64_t e = pi; e > 0; e >>= 1) {
                    if (e & 1) P = int_mul(P, base, mod);
                    if (e > 1) base = int_mul(base, base, mod);
                }
                std::int64_t tr = 0;
                for (std::size_t a = 0; a < n; ++a) tr = (tr + P[a][a]) % mod;
                if (tr % pi != 0) throw ArithmeticError("radical: trace not divisible by p^i");
                G(j, u) = F(tr / pi);
            }
        }
        I = I * G.kernel();
    }
    return I;
}

}  // namespace

void EndAlgebra::compute_radical() {
    const Field& F = m_.field;
    std::size_t n = basis_.size();
    if (n == 0) return;
    std::size_t D = m_.total_dim();
    // Image of f -> f0 as block diagonal matrices; its kernel is nilpotent.
    Matrix P(F, D * D, n);
    for (std::size_t k = 0; k < n; ++k) P.set_block(0, k, vec(block_diag_f0(F, basis_[k])));
    Matrix img = P.image();
    std::vector<Matrix> abasis;
    for (std::size_t k = 0; k < img.cols(); ++k) abasis.push_back(unvec(img.col(k), 0, D, D));
    Matrix J0(F, img.cols(), 0);
    if (F.is_prime()) {
        J0 = radical_prime(F, abasis);
    } else if (F.is_rational()) {
        Matrix T(F, abasis.size(), abasis.size());
        for (std::size_t i = 0; i < abasis.size(); ++i)
            for (std::size_t j = 0; j < abasis.size(); ++j) T(i, j) = (abasis[i] * abasis[j]).trace();
        J0 = T.kernel();
    } else {
        throw ArithmeticError("endomorphism radical over " + F.name() + " is not supported");
    }
    Matrix J0vec = img * J0;
    Matrix K = P.hstack(-J0vec).kernel();
    radical_ = K.cols() ? K.block(0, 0, n, K.cols()).image() : Matrix(F, n, 0);
    // J must be a two-sided nilpotent ideal.
    std::size_t rad = radical_.cols();
    for (std::size_t c = 0; c < rad; ++c) {
        Matrix x = radical_.col(c);
        Matrix Lx = left_mult(x);
        for (std::size_t k = 0; k < n; ++k) {
            Matrix e(F, n, 1);
            e(k, 0) = F.one();
            if (!in_radical(left_[k] * x) || !in_radical(Lx * e)) throw ArithmeticError("radical is not an ideal");
        }
    }
    Matrix power = radical_;
    for (std::size_t step = 0; power.cols() > 0; ++step) {
        if (step > D + 1) throw ArithmeticError("radical is not nilpotent");
        Matrix next(F, n, 0);
        for (std::size_t c = 0; c < rad; ++c) next = next.hstack(left_mult(radical_.col(c)) * power);
        next = next.cols() ? next.image() : next;
        if (next.cols() == power.cols() && next.cols() > 0) throw ArithmeticError("radical is not nilpotent");
        power = next;
    }
}

IdempotentSearch find_idempotent(const EndAlgebra& e, std::uint64_t seed) {
    IdempotentSearch out;
    std::size_t n = e.dim();
    if (n == 0) return out;
    Field F = e.one().field();
    std::size_t target = n - e.radical().cols();
    if (target == 1) {
        out.local = true;
        return out;
    }
    Matrix one = e.one();
    std::mt19937_64 rng(seed);
    auto idempotent_ok = [&](const Matrix& x) {
        return e.left_mult(x) * x == x && !x.is_zero() && x != one;
    };
    for (int trial = 0; trial < 200; ++trial) {
        Matrix a(F, n, 1);
        for (std::size_t k = 0; k < n; ++k) a(k, 0) = random_scalar(F, rng);
        Matrix La = e.left_mult(a);
        Poly mp = min_poly(La);
        std::vector<std::pair<Poly, int>> fac;
        try {
            fac = factor(mp);
        } catch (const ArithmeticError&) {
            continue;
        }
        if (fac.size() >= 2) {
            Poly q1 = fac[0].first.pow(fac[0].second);
            Poly rest = mp / q1;
            XGcd g = xgcd(q1, rest);
            Poly ep = g.t * rest * g.g.lead().inverse();
            Matrix x = eval_poly(ep, La) * one;
            if (idempotent_ok(x)) {
                out.idempotent = x;
                return out;
            }
            continue;
        }
        if (fac.size() == 1 && static_cast<std::size_t>(fac[0].first.degree()) == target) {
            out.local = true;
            return out;
        }
    }
    if (F.is_prime()) {
        double space = static_cast<double>(n) * std::log2(static_cast<double>(F.characteristic()));
        if (space <= 16.0) {
            std::vector<std::int64_t> digits(n, 0);
            std::int64_t p = F.characteristic();
            while (true) {
                std::size_t k = 0;
                while (k < n && ++digits[k] == p) digits[k++] = 0;
                if (k == n) break;
                Matrix x(F, n, 1);
                for (std::size_t i = 0; i < n; ++i) x(i, 0) = F(digits[i]);
                if (idempotent_ok(x)) {
                    out.idempotent = x;
                    return out;
                }
            }
            out.local = true;
            return out;
        }
    }
    throw ArithmeticError("no idempotent found and locality could not be certified");
}

Split split_idempotent(const Dit& d, const Rep& m, const Morphism& e) {
    const Layer& L = d.layer;
    const Field& F = m.field;
    std::size_t np = uz(d.npoints());
    std::vector<std::size_t> r(np);
    std::vector<Matrix> H;
    for (std::size_t p = 0; p < np; ++p) {
        if (m.dims[p] == 0) {
            r[p] = 0;
            H.emplace_back(F, 0, 0);
            continue;
        }
        Matrix im = e.f0[p].image(), ker = e.f0[p].kernel();
        r[p] = im.cols();
        H.push_back(im.hstack(ker));
    }
    Morphism h = zero_morphism(d, m, m);
    h.f0 = H;
    Rep cur = roiter_transport(d, m, h.f0, h.f1);
    auto hinv = inverse(d, cur, m, h);
    Morphism ep = compose(d, cur, m, cur, *hinv, compose(d, cur, m, m, e, h));
    for (int iter = 0;; ++iter) {
        bool done = true;
        for (int a = 0; a < d.narrows(); ++a)
            if (L.dashed(a) && !ep.f1[uz(a)].is_zero()) done = false;
        if (done) break;
        if (iter > 64) throw ArithmeticError("idempotent splitting did not converge");
        Morphism k = identity_morphism(d, cur);
        for (int a = 0; a < d.narrows(); ++a) {
            const Arrow& ar = L.arrow(a);
            if (!ar.dashed) continue;
            std::size_t rt = r[uz(ar.t)], rs = r[uz(ar.s)];
            std::size_t nt = cur.dims[uz(ar.t)], ns = cur.dims[uz(ar.s)];
            const Matrix& E1 = ep.f1[uz(a)];
            Matrix K(F, nt, ns);
            K.set_block(0, rs, -E1.block(0, rs, rt, ns - rs));
            K.set_block(rt, 0, E1.block(rt, 0, nt - rt, rs));
            k.f1[uz(a)] = K;
        }
        Rep next = roiter_transport(d, cur, k.f0, k.f1);
        auto kinv = inverse(d, next, cur, k);
        ep = compose(d, next, cur, next, *kinv, compose(d, next, cur, cur, ep, k));
        h = compose(d, next, cur, m, h, k);
        cur = next;
    }
    Rep m1 = zero_rep(d, F, r), m2 = zero_rep(d, F, m.dims);
    for (std::size_t p = 0; p < np; ++p) {
        std::size_t n = cur.dims[p], k = r[p];
        m2.dims[p] = n - k;
        Matrix eps(F, n, n);
        for (std::size_t i = 0; i < k; ++i) eps(i, i) = F.one();
        if (ep.f0[p] != eps) throw ArithmeticError("split idempotent is not in normal form");
        m1.X[p] = cur.X[p].block(0, 0, k, k);
        m2.X[p] = cur.X[p].block(k, k, n - k, n - k);
    }
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        if (ar.dashed) {
            m2.maps[uz(a)] = Matrix(F, 0, 0);
            continue;
        }
        std::size_t rs = r[uz(ar.s)], rt = r[uz(ar.t)];
        const Matrix& x = cur.maps[uz(a)];
        m1.maps[uz(a)] = x.block(0, 0, rt, rs);
        m2.maps[uz(a)] = x.block(rt, rs, x.rows() - rt, x.cols() - rs);
    }
    if (direct_sum(m1, m2) != cur) throw ArithmeticError("split module is not block diagonal");
    return {m1, m2, h};
}

Decomposition decompose(const Dit& d, const Rep& m, std::uint64_t seed) {
    if (m.total_dim() == 0) {
        Rep z = zero_rep(d, m.field, m.dims);
        return {{}, zero_morphism(d, z, m)};
    }
    EndAlgebra E(d, m);
    IdempotentSearch s = find_idempotent(E, seed);
    if (!s.idempotent) return {{m}, identity_morphism(d, m)};
    Split sp = split_idempotent(d, m, E.element(*s.idempotent));
    Decomposition a = decompose(d, sp.m1, seed * 2 + 1);
    Decomposition b = decompose(d, sp.m2, seed * 2 + 2);
    Decomposition out;
    out.summands = a.summands;
    out.summands.insert(out.summands.end(), b.summands.begin(), b.summands.end());
    Rep src = sum_of(d, m.field, out.summands);
    Rep mid = direct_sum(sp.m1, sp.m2);
    out.iso = compose(d, src, mid, m, sp.h, direct_sum(a.iso, b.iso));
    return out;
}

bool is_indecomposable(const Dit& d, const Rep& m, std::uint64_t seed) {
    if (m.total_dim() == 0) return false;
    EndAlgebra E(d, m);
    IdempotentSearch s = find_idempotent(E, seed);
    return s.local;
}

namespace {

bool iso_indecomposables(const Dit& d, const Rep& m, const Rep& n) {
    if (m.dims != n.dims) return false;
    auto A = hom(d, m, n), B = hom(d, n, m);
    for (const auto& a : A)
        for (const auto& b : B)
            if (f0_bijective(compose(d, m, n, m, b, a))) return true;
    return false;
}

}  // namespace

bool iso_test(const Dit& d, const Rep& m, const Rep& n, std::uint64_t seed) {
    if (m.dims != n.dims) return false;
    if (m.total_dim() == 0) return true;
    auto H = hom(d, m, n);
    if (H.empty()) return false;
    std::mt19937_64 rng(seed);
    const Field& F = m.field;
    if (F.is_prime() || F.is_rational())
        for (int trial = 0; trial < 8; ++trial) {
            Morphism f = zero_morphism(d, m, n);
            for (const auto& b : H) f = f + scale(b, random_scalar(F, rng));
            if (f0_bijective(f)) return true;
        }
    Decomposition dm = decompose(d, m, seed), dn = decompose(d, n, seed + 7);
    if (dm.summands.size() != dn.summands.size()) return false;
    std::vector<bool> used(dn.summands.size(), false);
    for (const auto& x : dm.summands) {
        bool found = false;
        for (std::size_t j = 0; j < dn.summands.size() && !found; ++j)
            if (!used[j] && iso_indecomposables(d, x, dn.summands[j])) used[j] = found = true;
        if (!found) return false;
    }
    return true;
}

std::size_t hom_dim_quotient(const QuotientPresentation& q, const Rep& m, const Rep& n) {
    const Dit& d = q.dit();
    const Layer& L = d.layer;
    const Field& F = m.field;
    int np = d.npoints();
    for (int p = 0; p < np; ++p)
        if (L.rational(p)) throw std::invalid_argument("the quotient route handles trivial points only");
    // Unknowns: f0 per point, then one block per quotient basis vector of each V-piece.
    std::vector<std::size_t> off0(uz(np));
    std::map<std::pair<int, int>, std::size_t> off1;
    std::size_t total = 0;
    for (int p = 0; p < np; ++p) {
        off0[uz(p)] = total;
        total += n.dims[uz(p)] * m.dims[uz(p)];
    }
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) {
            off1[{i, j}] = total;
            total += q.piece(i, j, 1).projection.rows() * n.dims[uz(j)] * m.dims[uz(i)];
        }
    if (total == 0) return 0;
    Equations eq(F, total);
    // Blocks of f1 evaluated on an element of e_j V e_i, composed as A f1 B.
    auto f1_blocks = [&](const Matrix& coords, int i, int j, const Matrix& A, const Matrix& B, const Scalar& s,
                         std::vector<std::pair<std::size_t, Matrix>>& blocks) {
        std::size_t blk = n.dims[uz(j)] * m.dims[uz(i)];
        Matrix kb = kron(B.transpose(), A) * s;
        for (std::size_t k = 0; k < coords.rows(); ++k)
            if (!coords(k, 0).is_zero()) blocks.emplace_back(off1[{i, j}] + k * blk, kb * coords(k, 0));
    };
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = L.arrow(a);
        if (ar.dashed) continue;
        std::size_t ms = m.dims[uz(ar.s)], nt = n.dims[uz(ar.t)];
        std::vector<std::pair<std::size_t, Matrix>> blocks;
        blocks.emplace_back(off0[uz(ar.s)], kron(Matrix::identity(F, ms), n.maps[uz(a)]));
        blocks.emplace_back(off0[uz(ar.t)], -kron(m.maps[uz(a)].transpose(), Matrix::identity(F, nt)));
        Matrix c = q.project(d.delta[uz(a)], ar.s, ar.t, 1);
        f1_blocks(c, ar.s, ar.t, Matrix::identity(F, nt), Matrix::identity(F, ms), F.coerce(Scalar(-1)), blocks);
        eq.add(nt * ms, blocks);
    }
    // Bimodule conditions on spanning words, on both sides.
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) {
            const auto& pc = q.piece(i, j, 1);
            for (const auto& w : pc.words) {
                Matrix cw = q.project(TensorElement::word(w, F.one()), i, j, 1);
                for (int b = 0; b < d.narrows(); ++b) {
                    const Arrow& br = L.arrow(b);
                    if (br.dashed) continue;
                    if (br.s == j) {
                        Word bw = w;
                        bw.arrows.push_back(b);
                        bw.decos.push_back(Deco{});
                        Matrix cb = q.project(TensorElement::word(bw, F.one()), i, br.t, 1);
                        std::vector<std::pair<std::size_t, Matrix>> blocks;
                        std::size_t mi = m.dims[uz(i)];
                        f1_blocks(cb, i, br.t, Matrix::identity(F, n.dims[uz(br.t)]), Matrix::identity(F, mi),
                                  F.one(), blocks);
                        f1_blocks(cw, i, j, n.maps[uz(b)], Matrix::identity(F, mi), F.coerce(Scalar(-1)), blocks);
                        eq.add(n.dims[uz(br.t)] * mi, blocks);
                    }
                    if (br.t == i) {
                        Word wb;
                        wb.src = br.s;
                        wb.arrows = {b};
                        wb.arrows.insert(wb.arrows.end(), w.arrows.begin(), w.arrows.end());
                        wb.decos = {Deco{}};
                        wb.decos.insert(wb.decos.end(), w.decos.begin(), w.decos.end());
                        Matrix cb = q.project(TensorElement::word(wb, F.one()), br.s, j, 1);
                        std::vector<std::pair<std::size_t, Matrix>> blocks;
                        std::size_t nj = n.dims[uz(j)];
                        f1_blocks(cb, br.s, j, Matrix::identity(F, nj), Matrix::identity(F, m.dims[uz(br.s)]),
                                  F.one(), blocks);
                        f1_blocks(cw, i, j, Matrix::identity(F, nj), m.maps[uz(b)], F.coerce(Scalar(-1)), blocks);
                        eq.add(nj * m.dims[uz(br.s)], blocks);
                    }
                }
            }
        }
    return eq.matrix().kernel().cols();
}

}  // namespace ditalg
