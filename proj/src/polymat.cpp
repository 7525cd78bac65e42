#include "ditalg/polymat.hpp"

#include <sstream>

namespace ditalg {

PolyMatrix::PolyMatrix(Field f, std::size_t rows, std::size_t cols)
    : F_(f), r_(rows), c_(cols), a_(rows * cols, Poly(f)) {}

PolyMatrix PolyMatrix::identity(Field f, std::size_t n) {
    PolyMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly::constant(f, f.one());
    return m;
}

PolyMatrix PolyMatrix::from_rows(Field f, const std::vector<std::vector<Poly>>& rows) {
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    PolyMatrix m(f, rows.size(), nc);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = rows[i].at(j);
    return m;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    if (c_ != o.r_) throw ArithmeticError("PolyMatrix shape mismatch");
    PolyMatrix r(F_, r_, o.c_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < c_; ++k) {
            if ((*this)(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.c_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
        }
    return r;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    PolyMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

bool PolyMatrix::operator==(const PolyMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

PolyMatrix PolyMatrix::hstack(const PolyMatrix& o) const {
    if (r_ != o.r_) throw ArithmeticError("PolyMatrix hstack mismatch");
    PolyMatrix m(F_, r_, c_ + o.c_);
    for (std::size_t i = 0; i < r_; ++i) {
        for (std::size_t j = 0; j < c_; ++j) m(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < o.c_; ++j) m(i, c_ + j) = o(i, j);
    }
    return m;
}

PolyMatrix PolyMatrix::select_cols(const std::vector<std::size_t>& idx) const {
    PolyMatrix m(F_, r_, idx.size());
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
}

PolyMatrix PolyMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    PolyMatrix m(F_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

PolyMatrix PolyMatrix::transpose() const {
    PolyMatrix m(F_, c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

bool PolyMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j)
            if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
}

Matrix PolyMatrix::over_function_field() const {
    Field K = Field::function_field(F_);
    Matrix m(K, r_, c_);
    Poly one = Poly::constant(F_, F_.one());
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) m(i, j) = Scalar::function(RatFun((*this)(i, j), one));
    return m;
}

Poly PolyMatrix::det() const {
    if (r_ != c_) throw ArithmeticError("det of non-square PolyMatrix");
    if (r_ == 0) return Poly::constant(F_, F_.one());
    Scalar d = over_function_field().det();
    const RatFun& f = d.ratfun();
    if (!f.den.is_one()) throw ArithmeticError("polynomial determinant with denominator");
    return f.num;
}

int PolyMatrix::max_degree() const {
    int d = -1;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
}

std::string PolyMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    }
    os << "]";
    return os.str();
}

std::vector<Poly> SmithForm::invariant_factors() const {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) out.push_back(D(i, i));
    return out;
}

namespace {

// Row/column operations applied simultaneously to D and the transforms.
struct SnfState {
    PolyMatrix D, P, Pi, Q, Qi;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < D.cols(); ++j) std::swap(D(a, j), D(b, j));
        for (std::size_t j = 0; j < P.cols(); ++j) std::swap(P(a, j), P(b, j));
        for (std::size_t i = 0; i < Pi.rows(); ++i) std::swap(Pi(i, a), Pi(i, b));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < D.rows(); ++i) std::swap(D(i, a), D(i, b));
        for (std::size_t i = 0; i < Q.rows(); ++i) std::swap(Q(i, a), Q(i, b));
        for (std::size_t j = 0; j < Qi.cols(); ++j) std::swap(Qi(a, j), Qi(b, j));
    }
    // row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const Poly& f) {
        for (std::size_t j = 0; j < D.cols(); ++j)
            if (!D(src, j).is_zero()) D(dst, j) += f * D(src, j);
        for (std::size_t j = 0; j < P.cols(); ++j)
            if (!P(src, j).is_zero()) P(dst, j) += f * P(src, j);
        for (std::size_t i = 0; i < Pi.rows(); ++i)
            if (!Pi(i, dst).is_zero()) Pi(i, src) -= Pi(i, dst) * f;
    }
    // col[dst] += f * col[src]
    void add_col(std::size_t dst, std::size_t src, const Poly& f) {
        for (std::size_t i = 0; i < D.rows(); ++i)
            if (!D(i, src).is_zero()) D(i, dst) += D(i, src) * f;
        for (std::size_t i = 0; i < Q.rows(); ++i)
            if (!Q(i, src).is_zero()) Q(i, dst) += Q(i, src) * f;
        for (std::size_t j = 0; j < Qi.cols(); ++j)
            if (!Qi(dst, j).is_zero()) Qi(src, j) -= f * Qi(dst, j);
    }
    void scale_row(std::size_t r, const Scalar& s) {
        for (std::size_t j = 0; j < D.cols(); ++j) D(r, j) = D(r, j) * s;
        for (std::size_t j = 0; j < P.cols(); ++j) P(r, j) = P(r, j) * s;
        Scalar si = s.inverse();
        for (std::size_t i = 0; i < Pi.rows(); ++i) Pi(i, r) = Pi(i, r) * si;
    }
};

}  // namespace

SmithForm smith_normal_form(const PolyMatrix& m) {
    const Field& F = m.field();
    std::size_t R = m.rows(), C = m.cols();
    SnfState s{m, PolyMatrix::identity(F, R), PolyMatrix::identity(F, R), PolyMatrix::identity(F, C),
               PolyMatrix::identity(F, C)};
    std::size_t t = 0;
    for (; t < std::min(R, C); ++t) {
        for (;;) {
            // Minimal-degree pivot in the trailing block, row-major ties.
            std::size_t pi = R, pj = C;
            int best = -1;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j) {
                    const Poly& e = s.D(i, j);
                    if (e.is_zero()) continue;
                    if (best < 0 || e.degree() < best) {
                        best = e.degree();
                        pi = i;
                        pj = j;
                    }
                }
            if (best < 0) goto done;
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (s.D(i, t).is_zero()) continue;
                Poly q = s.D(i, t) / s.D(t, t);
                s.add_row(i, t, -q);
                if (!s.D(i, t).is_zero()) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (s.D(t, j).is_zero()) continue;
                Poly q = s.D(t, j) / s.D(t, t);
                s.add_col(j, t, -q);
                if (!s.D(t, j).is_zero()) clean = false;
            }
            if (!clean) continue;
            // Divisibility: fold an offending row into the pivot row.
            bool divisible = true;
            for (std::size_t i = t + 1; i < R && divisible; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (!s.D(t, t).divides(s.D(i, j))) {
                        s.add_row(t, i, Poly::constant(F, F.one()));
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        s.scale_row(t, s.D(t, t).lead().inverse());
    }
done:
    SmithForm out{s.P, s.D, s.Q, s.Pi, s.Qi, 0};
    for (std::size_t i = 0; i < std::min(R, C); ++i)
        if (!s.D(i, i).is_zero()) ++out.rank;
    return out;
}

PolyMatrix syzygies(const PolyMatrix& m) {
    SmithForm sf = smith_normal_form(m);
    std::vector<std::size_t> idx;
    for (std::size_t j = sf.rank; j < m.cols(); ++j) idx.push_back(j);
    return sf.Q.select_cols(idx);
}

Localization localize_to_free(const ModulePresentation& u, const std::vector<PolyMatrix>& filtration) {
    const Field& F = u.field;
    std::size_t n = u.generators;
    Poly one = Poly::constant(F, F.one());
    std::vector<PolyMatrix> gens = filtration;
    gens.push_back(PolyMatrix::identity(F, n));
    Localization out{one, {}, {}};
    PolyMatrix basis(F, n, 0);
    PolyMatrix lower = u.relations;
    for (const PolyMatrix& g : gens) {
        if (g.rows() != n) throw ArithmeticError("filtration generator has wrong length");
        std::size_t s = g.cols();
        // Relations among the generators of g modulo the previous layer.
        PolyMatrix syz = syzygies(g.hstack(lower));
        PolyMatrix rel = syz.block(0, 0, s, syz.cols());
        SmithForm sf = smith_normal_form(rel);
        for (std::size_t j = 0; j < sf.rank; ++j) {
            const Poly& d = sf.D(j, j);
            if (d.degree() > 0) out.h = lcm(out.h, d);
        }
        std::vector<std::size_t> free;
        for (std::size_t j = sf.rank; j < s; ++j) free.push_back(j);
        PolyMatrix lift = g * sf.P_inv.select_cols(free);
        basis = basis.hstack(lift);
        out.bases.push_back(basis);
        out.ranks.push_back(basis.cols());
        lower = lower.hstack(g);
    }
    // Factors of the already inverted g contribute nothing.
    if (!u.inverted.is_zero() && u.inverted.degree() > 0) {
        for (;;) {
            Poly c = gcd(out.h, u.inverted);
            if (c.degree() <= 0) break;
            out.h = out.h / c;
        }
    }
    out.h = out.h.monic();
    return out;
}

}  // namespace ditalg
