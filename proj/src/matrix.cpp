#include "ditalg/matrix.hpp"

#include <sstream>

namespace ditalg {

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols)
    : F_(f), r_(rows), c_(cols), a_(rows * cols, f.zero()) {}

Matrix Matrix::identity(Field f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<std::vector<Scalar>>& rows) {
    std::size_t nc = rows.empty() ? 0 : rows[0].size();
    Matrix m(f, rows.size(), nc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != nc) throw ArithmeticError("ragged matrix rows");
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = f.coerce(rows[i][j]);
    }
    return m;
}

Matrix Matrix::column(Field f, const std::vector<Scalar>& v) {
    Matrix m(f, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = f.coerce(v[i]);
    return m;
}

static void check_same(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ArithmeticError(std::string("shape mismatch in ") + op + ": " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
}

// Result field when combining two matrices (function fields absorb their base).
static Field join(const Field& a, const Field& b) {
    if (a == b) return a;
    if (a.is_function() && a.base() == b) return a;
    if (b.is_function() && b.base() == a) return b;
    throw ArithmeticError("mixing matrices over " + a.name() + " and " + b.name());
}

Matrix Matrix::operator+(const Matrix& o) const {
    check_same(*this, o, "+");
    Matrix r(join(F_, o.F_), r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    check_same(*this, o, "+=");
    F_ = join(F_, o.F_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] = a_[i] + o.a_[i];
    return *this;
}

Matrix Matrix::operator-(const Matrix& o) const {
    check_same(*this, o, "-");
    Matrix r(join(F_, o.F_), r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Matrix Matrix::operator-() const {
    Matrix r(F_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (c_ != o.r_)
        throw ArithmeticError("shape mismatch in *: " + std::to_string(r_) + "x" + std::to_string(c_) + " times " +
                              std::to_string(o.r_) + "x" + std::to_string(o.c_));
    Field g = join(F_, o.F_);
    Matrix r(g, r_, o.c_);
    if (g.is_prime()) {
        const std::int64_t p = g.characteristic();
        std::vector<unsigned __int128> acc(o.c_);
        for (std::size_t i = 0; i < r_; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t k = 0; k < c_; ++k) {
                std::int64_t x = a_[i * c_ + k].residue();
                if (x == 0) continue;
                for (std::size_t j = 0; j < o.c_; ++j) {
                    acc[j] += static_cast<unsigned __int128>(x) * static_cast<std::uint64_t>(o.a_[k * o.c_ + j].residue());
                    if (p > (std::int64_t{1} << 31)) acc[j] %= static_cast<unsigned __int128>(p);
                }
            }
            for (std::size_t j = 0; j < o.c_; ++j)
                r.a_[i * o.c_ + j] = Scalar::prime(p, static_cast<std::int64_t>(acc[j] % static_cast<unsigned __int128>(p)));
        }
        return r;
    }
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t k = 0; k < c_; ++k) {
            const Scalar& x = a_[i * c_ + k];
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < o.c_; ++j) r.a_[i * o.c_ + j] += x * o.a_[k * o.c_ + j];
        }
    return r;
}

Matrix Matrix::operator*(const Scalar& s) const {
    Matrix r = *this;
    for (auto& x : r.a_) x = x * s;
    if (!s.is_loose() && s.field() != F_) r.F_ = join(F_, s.field());
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

Matrix Matrix::transpose() const {
    Matrix t(F_, c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::is_identity() const {
    if (r_ != c_) return false;
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) {
            const Scalar& x = (*this)(i, j);
            if (i == j ? !x.is_one() : !x.is_zero()) return false;
        }
    return true;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > r_ || c0 + nc > c_) throw ArithmeticError("block out of range");
    Matrix b(F_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw ArithmeticError("set_block out of range");
    if (b.F_ != F_) F_ = join(F_, b.F_);
    for (std::size_t i = 0; i < b.r_; ++i)
        for (std::size_t j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw ArithmeticError("add_block out of range");
    if (b.F_ != F_) F_ = join(F_, b.F_);
    for (std::size_t i = 0; i < b.r_; ++i)
        for (std::size_t j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) += b(i, j);
}

Matrix Matrix::hstack(const Matrix& o) const {
    if (r_ != o.r_) throw ArithmeticError("hstack row mismatch");
    Matrix m(join(F_, o.F_), r_, c_ + o.c_);
    m.set_block(0, 0, *this);
    m.set_block(0, c_, o);
    return m;
}

Matrix Matrix::vstack(const Matrix& o) const {
    if (c_ != o.c_) throw ArithmeticError("vstack column mismatch");
    Matrix m(join(F_, o.F_), r_ + o.r_, c_);
    m.set_block(0, 0, *this);
    m.set_block(r_, 0, o);
    return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(F_, r_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t i = 0; i < r_; ++i) m(i, j) = (*this)(i, idx[j]);
    return m;
}

Matrix Matrix::in_field(const Field& g) const {
    Matrix m(g, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = g.coerce(a_[i]);
    return m;
}

// Row reduction to reduced echelon form. The prime-field case runs on raw
// residues.
Matrix::Rref Matrix::rref() const {
    Rref out{*this, {}};
    Matrix& m = out.reduced;
    if (F_.is_prime()) {
        const std::int64_t p = F_.characteristic();
        std::vector<std::int64_t> a(a_.size());
        for (std::size_t i = 0; i < a_.size(); ++i) a[i] = a_[i].residue();
        std::size_t row = 0;
        for (std::size_t col = 0; col < c_ && row < r_; ++col) {
            std::size_t piv = row;
            while (piv < r_ && a[piv * c_ + col] == 0) ++piv;
            if (piv == r_) continue;
            if (piv != row)
                for (std::size_t j = 0; j < c_; ++j) std::swap(a[piv * c_ + j], a[row * c_ + j]);
            std::int64_t inv = mod_inverse(a[row * c_ + col], p);
            for (std::size_t j = col; j < c_; ++j)
                a[row * c_ + j] = static_cast<std::int64_t>((static_cast<__int128>(a[row * c_ + j]) * inv) % p);
            for (std::size_t i = 0; i < r_; ++i) {
                if (i == row) continue;
                std::int64_t f = a[i * c_ + col];
                if (f == 0) continue;
                for (std::size_t j = col; j < c_; ++j) {
                    std::int64_t v = a[row * c_ + j];
                    if (v == 0) continue;
                    std::int64_t t = a[i * c_ + j] - static_cast<std::int64_t>((static_cast<__int128>(f) * v) % p);
                    a[i * c_ + j] = t < 0 ? t + p : t;
                }
            }
            out.pivots.push_back(col);
            ++row;
        }
        for (std::size_t i = 0; i < a.size(); ++i) m.a_[i] = Scalar::prime(p, a[i]);
        return out;
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < c_ && row < r_; ++col) {
        std::size_t piv = row;
        while (piv < r_ && m(piv, col).is_zero()) ++piv;
        if (piv == r_) continue;
        if (piv != row)
            for (std::size_t j = 0; j < c_; ++j) std::swap(m(piv, j), m(row, j));
        Scalar inv = m(row, col).inverse();
        for (std::size_t j = col; j < c_; ++j) m(row, j) = m(row, j) * inv;
        for (std::size_t i = 0; i < r_; ++i) {
            if (i == row) continue;
            Scalar f = m(i, col);
            if (f.is_zero()) continue;
            for (std::size_t j = col; j < c_; ++j)
                if (!m(row, j).is_zero()) m(i, j) = m(i, j) - f * m(row, j);
        }
        out.pivots.push_back(col);
        ++row;
    }
    return out;
}

std::size_t Matrix::rank() const { return rref().pivots.size(); }

Matrix Matrix::kernel() const {
    Rref rr = rref();
    std::vector<bool> is_piv(c_, false);
    for (auto p : rr.pivots) is_piv[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < c_; ++j)
        if (!is_piv[j]) free.push_back(j);
    Matrix k(F_, c_, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = F_.one();
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) k(rr.pivots[i], f) = -rr.reduced(i, free[f]);
    }
    return k;
}

Matrix Matrix::image() const { return select_cols(rref().pivots); }

std::optional<Matrix> Matrix::inverse() const {
    if (r_ != c_) return std::nullopt;
    Rref rr = hstack(identity(F_, r_)).rref();
    if (rr.pivots.size() < r_ || (r_ > 0 && rr.pivots[r_ - 1] != r_ - 1)) return std::nullopt;
    return rr.reduced.block(0, r_, r_, r_);
}

Scalar Matrix::det() const {
    if (r_ != c_) throw ArithmeticError("det of non-square matrix");
    Matrix m = *this;
    Scalar d = F_.one();
    for (std::size_t col = 0; col < c_; ++col) {
        std::size_t piv = col;
        while (piv < r_ && m(piv, col).is_zero()) ++piv;
        if (piv == r_) return F_.zero();
        if (piv != col) {
            for (std::size_t j = 0; j < c_; ++j) std::swap(m(piv, j), m(col, j));
            d = -d;
        }
        d = d * m(col, col);
        Scalar inv = m(col, col).inverse();
        for (std::size_t i = col + 1; i < r_; ++i) {
            Scalar f = m(i, col) * inv;
            if (f.is_zero()) continue;
            for (std::size_t j = col; j < c_; ++j) m(i, j) = m(i, j) - f * m(col, j);
        }
    }
    return d;
}

Scalar Matrix::trace() const {
    Scalar t = F_.zero();
    for (std::size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
}

Matrix Matrix::pow(std::int64_t e) const {
    Matrix r = identity(F_, r_), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << (*this)(i, j).to_string();
    }
    os << "]";
    return os.str();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Scalar& x = a(i, j);
            if (x.is_zero()) continue;
            k.set_block(i * b.rows(), j * b.cols(), b * x);
        }
    return k;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

LinearSolution solve_linear(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw ArithmeticError("solve_linear: row mismatch");
    LinearSolution out{false, std::nullopt, a.kernel()};
    Matrix::Rref rr = a.hstack(b).rref();
    for (auto p : rr.pivots)
        if (p >= a.cols()) return out;
    Matrix x(a.field(), a.cols(), b.cols());
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(rr.pivots[i], j) = rr.reduced(i, a.cols() + j);
    out.consistent = true;
    out.particular = x;
    return out;
}

Matrix eval_poly(const Poly& p, const Matrix& a) {
    Matrix r(a.field(), a.rows(), a.cols());
    for (int i = p.degree(); i >= 0; --i) r = r * a + Matrix::identity(a.field(), a.rows()) * p.coeff(i);
    return r;
}

Poly min_poly(const Matrix& a) {
    const Field& F = a.field();
    std::size_t n = a.rows();
    if (n == 0) return Poly::constant(F, F.one());
    // Powers of a flattened as columns until linear dependence.
    Matrix cols(F, n * n, 0);
    Matrix cur = Matrix::identity(F, n);
    for (std::size_t k = 0; k <= n; ++k) {
        Matrix v(F, n * n, 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v(i * n + j, 0) = cur(i, j);
        LinearSolution s = solve_linear(cols, v);
        if (s.consistent) {
            std::vector<Scalar> c;
            for (std::size_t i = 0; i < k; ++i) c.push_back(-(*s.particular)(i, 0));
            c.push_back(F.one());
            return Poly(F, c);
        }
        cols = cols.cols() == 0 ? v : cols.hstack(v);
        cur = cur * a;
    }
    throw ArithmeticError("min_poly: Cayley-Hamilton violated");
}

SpanCoordinates::SpanCoordinates(const Matrix& basis)
    : basis_(basis), left_(basis.field(), 0, 0), rank_(0) {
    std::size_t n = basis.rows(), k = basis.cols();
    Matrix::Rref rr = basis.hstack(Matrix::identity(basis.field(), n)).rref();
    left_ = rr.reduced.block(0, k, n, n);
    for (auto p : rr.pivots) {
        if (p >= k) break;
        pivots_.push_back(p);
    }
    rank_ = pivots_.size();
}

std::optional<Matrix> SpanCoordinates::coords(const Matrix& v) const {
    Matrix w = left_ * v;
    for (std::size_t i = rank_; i < w.rows(); ++i)
        if (!w(i, 0).is_zero()) return std::nullopt;
    Matrix c(basis_.field(), basis_.cols(), 1);
    for (std::size_t i = 0; i < rank_; ++i) c(pivots_[i], 0) = w(i, 0);
    return c;
}

}  // namespace ditalg
