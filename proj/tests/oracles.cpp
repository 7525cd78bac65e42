#include "oracles.hpp"

#include <stdexcept>

namespace ditalg::oracle {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

std::int64_t md(std::int64_t v, std::int64_t p) { return ((v % p) + p) % p; }

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t r = 1, e = p - 2;
    a = md(a, p);
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(Mat& m) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.c && row < m.r; ++col) {
        std::size_t k = row;
        while (k < m.r && m(k, col) == 0) ++k;
        if (k == m.r) continue;
        for (std::size_t j = 0; j < m.c; ++j) std::swap(m(k, j), m(row, j));
        std::int64_t s = inv_mod(m(row, col), m.p);
        for (std::size_t j = 0; j < m.c; ++j) m(row, j) = m(row, j) * s % m.p;
        for (std::size_t i = 0; i < m.r; ++i) {
            if (i == row || m(i, col) == 0) continue;
            std::int64_t f = m(i, col);
            for (std::size_t j = 0; j < m.c; ++j) m(i, j) = md(m(i, j) - f * m(row, j), m.p);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

Mat to_oracle(std::int64_t p, const Matrix& m) {
    Mat o(p, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) o(i, j) = md(m.field().coerce(m(i, j)).residue(), p);
    return o;
}

Matrix to_matrix(const Field& F, const Mat& m) {
    Matrix out(F, m.r, m.c);
    for (std::size_t i = 0; i < m.r; ++i)
        for (std::size_t j = 0; j < m.c; ++j) out(i, j) = F(m(i, j));
    return out;
}

void require_trivial(const Dit& d) {
    if (!d.field().is_prime()) throw std::invalid_argument("oracle: prime fields only");
    for (int p = 0; p < d.npoints(); ++p)
        if (d.layer.rational(p)) throw std::invalid_argument("oracle: trivial points only");
}

// Product of the arrow maps along arrows[from, to) in application order.
Mat eval_path(const std::vector<Mat>& maps, const std::vector<std::size_t>& dims, std::int64_t p, int start,
              const std::vector<int>& arrows, std::size_t from, std::size_t to, const std::vector<int>& src) {
    int at = from < arrows.size() && from < to ? src[uz(arrows[from])] : start;
    Mat acc = identity(p, dims[uz(at)]);
    for (std::size_t k = from; k < to; ++k) acc = mul(maps[uz(arrows[k])], acc);
    return acc;
}

}  // namespace

bool Mat::is_zero() const {
    for (auto v : a)
        if (v) return false;
    return true;
}

Mat mul(const Mat& x, const Mat& y) {
    if (x.c != y.r) throw std::invalid_argument("oracle: shape mismatch");
    Mat z(x.p, x.r, y.c);
    for (std::size_t i = 0; i < x.r; ++i)
        for (std::size_t k = 0; k < x.c; ++k) {
            std::int64_t v = x(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < y.c; ++j) z(i, j) = (z(i, j) + v * y(k, j)) % x.p;
        }
    return z;
}

Mat add(const Mat& x, const Mat& y, std::int64_t s) {
    if (x.r != y.r || x.c != y.c) throw std::invalid_argument("oracle: shape mismatch");
    Mat z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = md(z.a[i] + s * y.a[i], x.p);
    return z;
}

Mat identity(std::int64_t p, std::size_t n) {
    Mat m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::size_t rank(Mat m) { return echelon(m).size(); }

std::vector<std::vector<std::int64_t>> kernel(Mat m) {
    auto piv = echelon(m);
    std::vector<bool> is_piv(m.c, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<std::int64_t>> out;
    for (std::size_t f = 0; f < m.c; ++f) {
        if (is_piv[f]) continue;
        std::vector<std::int64_t> v(m.c, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = md(-m(i, f), m.p);
        out.push_back(v);
    }
    return out;
}

Mat from_matrix(const Matrix& m) { return to_oracle(m.field().characteristic(), m); }

std::vector<Mat> from_rep_maps(const Rep& m) {
    std::vector<Mat> out;
    for (const auto& x : m.maps) out.push_back(to_oracle(m.field.characteristic(), x));
    return out;
}

OAlgebra::OAlgebra(const Dit& d) : p(d.field().characteristic()) {
    require_trivial(d);
    for (int a = 0; a < d.narrows(); ++a) {
        src.push_back(d.layer.arrow(a).s);
        tgt.push_back(d.layer.arrow(a).t);
        dashed.push_back(d.layer.arrow(a).dashed);
    }
    for (int a = 0; a < d.narrows(); ++a) delta.push_back(from(d.delta[uz(a)]));
}

OElem OAlgebra::from(const TensorElement& e) const {
    OElem out;
    for (const auto& [w, c] : e.terms()) {
        std::int64_t v = md(c.is_loose() ? c.loose_value() : c.residue(), p);
        if (v) out[{w.src, w.arrows}] = v;
    }
    return out;
}

OElem OAlgebra::add(const OElem& u, const OElem& v, std::int64_t s) const {
    OElem out = u;
    for (const auto& [w, c] : v) {
        std::int64_t& x = out[w];
        x = md(x + s * c, p);
        if (!x) out.erase(w);
    }
    return out;
}

OElem OAlgebra::mul(const OElem& u, const OElem& v) const {
    OElem out;
    for (const auto& [wv, cv] : v) {
        int end = wv.second.empty() ? wv.first : tgt[uz(wv.second.back())];
        for (const auto& [wu, cu] : u) {
            if (wu.first != end) continue;
            std::vector<int> arrows = wv.second;
            arrows.insert(arrows.end(), wu.second.begin(), wu.second.end());
            OElem t{{{wv.first, arrows}, cu * cv % p}};
            out = add(out, t);
        }
    }
    return out;
}

int OAlgebra::degree(const OWord& w) const {
    int d = 0;
    for (int a : w.second) d += dashed[uz(a)] ? 1 : 0;
    return d;
}

OElem OAlgebra::diff(const OElem& e) const {
    OElem out;
    for (const auto& [w, c] : e) {
        const auto& arr = w.second;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            int later = 0;
            for (std::size_t j = k + 1; j < arr.size(); ++j) later += dashed[uz(arr[j])] ? 1 : 0;
            std::int64_t sign = later % 2 ? -1 : 1;
            OElem before{{{w.first, std::vector<int>(arr.begin(), arr.begin() + static_cast<long>(k))}, 1}};
            int mid = tgt[uz(arr[k])];
            OElem after{{{mid, std::vector<int>(arr.begin() + static_cast<long>(k) + 1, arr.end())}, 1}};
            OElem term = mul(after, mul(delta[uz(arr[k])], before));
            out = add(out, term, md(sign * c, p));
        }
    }
    return out;
}

namespace {

// Stacked entries of N(a) f0 - f0 M(a) - f1(δa) over the solid arrows.
std::vector<std::int64_t> residual(const OAlgebra& A, const Rep& m, const Rep& n, const std::vector<Mat>& M,
                                   const std::vector<Mat>& N, const std::vector<Mat>& f0, const std::vector<Mat>& f1) {
    std::int64_t p = A.p;
    std::vector<std::int64_t> out;
    for (std::size_t a = 0; a < A.src.size(); ++a) {
        if (A.dashed[a]) continue;
        int s = A.src[a], t = A.tgt[a];
        Mat r = add(mul(N[a], f0[uz(s)]), mul(f0[uz(t)], M[a]), -1);
        for (const auto& [w, c] : A.delta[a]) {
            const auto& arr = w.second;
            std::size_t k = arr.size();
            for (std::size_t j = 0; j < arr.size(); ++j)
                if (A.dashed[uz(arr[j])]) k = j;
            if (k == arr.size()) throw std::invalid_argument("oracle: δ of a solid arrow has degree 1");
            Mat right = eval_path(M, m.dims, p, w.first, arr, 0, k, A.src);
            Mat left = eval_path(N, n.dims, p, A.tgt[uz(arr[k])], arr, k + 1, arr.size(), A.src);
            r = add(r, mul(left, mul(f1[uz(arr[k])], right)), -c);
        }
        out.insert(out.end(), r.a.begin(), r.a.end());
    }
    return out;
}

// Zero f0 and f1 of the right shapes for m -> n.
std::pair<std::vector<Mat>, std::vector<Mat>> zero_parts(const OAlgebra& A, const Rep& m, const Rep& n) {
    std::vector<Mat> f0, f1;
    for (std::size_t q = 0; q < m.dims.size(); ++q) f0.emplace_back(A.p, n.dims[q], m.dims[q]);
    for (std::size_t a = 0; a < A.src.size(); ++a)
        f1.push_back(A.dashed[a] ? Mat(A.p, n.dims[uz(A.tgt[a])], m.dims[uz(A.src[a])]) : Mat(A.p, 0, 0));
    return {f0, f1};
}

}  // namespace

bool is_morphism(const Dit& d, const Rep& m, const Rep& n, const Morphism& f) {
    OAlgebra A(d);
    std::int64_t p = A.p;
    if (f.f0.size() != uz(d.npoints()) || f.f1.size() != uz(d.narrows())) return false;
    for (int q = 0; q < d.npoints(); ++q)
        if (f.f0[uz(q)].rows() != n.dims[uz(q)] || f.f0[uz(q)].cols() != m.dims[uz(q)]) return false;
    for (int a = 0; a < d.narrows(); ++a)
        if (A.dashed[uz(a)] &&
            (f.f1[uz(a)].rows() != n.dims[uz(A.tgt[uz(a)])] || f.f1[uz(a)].cols() != m.dims[uz(A.src[uz(a)])]))
            return false;
    std::vector<Mat> f0, f1;
    for (const auto& x : f.f0) f0.push_back(to_oracle(p, x));
    for (std::size_t a = 0; a < f.f1.size(); ++a)
        f1.push_back(A.dashed[a] ? to_oracle(p, f.f1[a]) : Mat(p, 0, 0));
    for (auto v : residual(A, m, n, from_rep_maps(m), from_rep_maps(n), f0, f1))
        if (v) return false;
    return true;
}

std::size_t hom_dim(const Dit& d, const Rep& m, const Rep& n) {
    OAlgebra A(d);
    auto M = from_rep_maps(m), N = from_rep_maps(n);
    auto [f0, f1] = zero_parts(A, m, n);
    // Column k of the system: the residual of the k-th unit unknown.
    std::vector<std::vector<std::int64_t>> cols;
    auto unit = [&](std::vector<Mat>& part) {
        for (auto& x : part)
            for (auto& e : x.a) {
                e = 1;
                cols.push_back(residual(A, m, n, M, N, f0, f1));
                e = 0;
            }
    };
    unit(f0);
    unit(f1);
    if (cols.empty()) return 0;
    Mat sys(A.p, cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i) sys(i, j) = cols[j][i];
    return cols.size() - rank(sys);
}

Morphism compose(const Dit& d, const Rep& m, const Rep& n, const Rep& l, const Morphism& g, const Morphism& f) {
    OAlgebra A(d);
    std::int64_t p = A.p;
    const Field& F = d.field();
    auto M = from_rep_maps(m), N = from_rep_maps(n), Lm = from_rep_maps(l);
    auto conv = [&](const std::vector<Matrix>& v) {
        std::vector<Mat> o;
        for (const auto& x : v) o.push_back(to_oracle(p, x));
        return o;
    };
    auto f0 = conv(f.f0), f1 = conv(f.f1), g0 = conv(g.f0), g1 = conv(g.f1);
    Morphism out;
    for (int q = 0; q < d.npoints(); ++q) out.f0.push_back(to_matrix(F, mul(g0[uz(q)], f0[uz(q)])));
    for (int a = 0; a < d.narrows(); ++a) {
        if (!A.dashed[uz(a)]) {
            out.f1.emplace_back(F, 0, 0);
            continue;
        }
        int s = A.src[uz(a)], t = A.tgt[uz(a)];
        Mat v = add(mul(g0[uz(t)], f1[uz(a)]), mul(g1[uz(a)], f0[uz(s)]));
        for (const auto& [w, c] : A.delta[uz(a)]) {
            const auto& arr = w.second;
            std::vector<std::size_t> pos;
            for (std::size_t j = 0; j < arr.size(); ++j)
                if (A.dashed[uz(arr[j])]) pos.push_back(j);
            if (pos.size() != 2) throw std::invalid_argument("oracle: δ of a dashed arrow has degree 2");
            std::size_t k1 = pos[0], k2 = pos[1];
            Mat right = eval_path(M, m.dims, p, w.first, arr, 0, k1, A.src);
            Mat mid = eval_path(N, n.dims, p, A.tgt[uz(arr[k1])], arr, k1 + 1, k2, A.src);
            Mat left = eval_path(Lm, l.dims, p, A.tgt[uz(arr[k2])], arr, k2 + 1, arr.size(), A.src);
            Mat term = mul(left, mul(g1[uz(arr[k2])], mul(mid, mul(f1[uz(arr[k1])], right))));
            v = add(v, term, c);
        }
        out.f1.push_back(to_matrix(F, v));
    }
    return out;
}

bool satisfies_ideal(const Dit& d, const Rep& m) {
    OAlgebra A(d);
    auto M = from_rep_maps(m);
    for (const auto& h : d.ideal) {
        std::map<std::pair<int, int>, Mat> sums;
        for (const auto& [w, c] : A.from(h)) {
            int end = w.second.empty() ? w.first : A.tgt[uz(w.second.back())];
            Mat v = eval_path(M, m.dims, A.p, w.first, w.second, 0, w.second.size(), A.src);
            auto key = std::make_pair(w.first, end);
            auto it = sums.find(key);
            if (it == sums.end())
                sums.emplace(key, add(Mat(A.p, v.r, v.c), v, c));
            else
                it->second = add(it->second, v, c);
        }
        for (const auto& [k, v] : sums)
            if (!v.is_zero()) return false;
    }
    return true;
}

std::vector<Rep> all_reps(const Dit& d, const std::vector<std::size_t>& dims) {
    require_trivial(d);
    std::int64_t p = d.field().characteristic();
    std::vector<std::pair<int, std::size_t>> slots;  // (arrow, entry)
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = d.layer.arrow(a);
        if (ar.dashed) continue;
        for (std::size_t e = 0; e < dims[uz(ar.t)] * dims[uz(ar.s)]; ++e) slots.emplace_back(a, e);
    }
    double count = 1;
    for (std::size_t k = 0; k < slots.size(); ++k) count *= static_cast<double>(p);
    if (count > 5e6) throw std::invalid_argument("oracle: too many representations");
    std::vector<std::int64_t> digits(slots.size(), 0);
    std::vector<Rep> out;
    for (;;) {
        Rep r = zero_rep(d, d.field(), dims);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            auto [a, e] = slots[k];
            Matrix& x = r.maps[uz(a)];
            x(e / x.cols(), e % x.cols()) = d.field()(digits[k]);
        }
        if (satisfies_ideal(d, r)) out.push_back(r);
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
        if (k == digits.size()) break;
    }
    return out;
}

std::optional<bool> indecomposable_by_enumeration(const Dit& d, const Rep& m, std::size_t max_elements) {
    require_trivial(d);
    std::int64_t p = d.field().characteristic();
    if (m.total_dim() == 0) return false;
    // Unknowns: the entries of f_q for every point, row-major, concatenated.
    std::vector<std::size_t> off;
    std::size_t nvar = 0;
    for (int q = 0; q < d.npoints(); ++q) {
        off.push_back(nvar);
        nvar += m.dims[uz(q)] * m.dims[uz(q)];
    }
    auto M = from_rep_maps(m);
    std::vector<std::vector<std::int64_t>> rows;
    for (int a = 0; a < d.narrows(); ++a) {
        const Arrow& ar = d.layer.arrow(a);
        if (ar.dashed) throw std::invalid_argument("oracle: solid arrows only");
        std::size_t ds = m.dims[uz(ar.s)], dt = m.dims[uz(ar.t)];
        // (M f_s - f_t M)(i, j) = 0
        for (std::size_t i = 0; i < dt; ++i)
            for (std::size_t j = 0; j < ds; ++j) {
                std::vector<std::int64_t> row(nvar, 0);
                for (std::size_t k = 0; k < ds; ++k) {
                    std::size_t v = off[uz(ar.s)] + k * ds + j;
                    row[v] = md(row[v] + M[uz(a)](i, k), p);
                }
                for (std::size_t k = 0; k < dt; ++k) {
                    std::size_t v = off[uz(ar.t)] + i * dt + k;
                    row[v] = md(row[v] - M[uz(a)](k, j), p);
                }
                rows.push_back(row);
            }
    }
    Mat eq(p, rows.size(), nvar);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < nvar; ++j) eq(i, j) = rows[i][j];
    auto basis = kernel(eq);
    double count = 1;
    for (std::size_t k = 0; k < basis.size(); ++k) count *= static_cast<double>(p);
    if (count > static_cast<double>(max_elements)) return std::nullopt;
    std::vector<std::int64_t> coef(basis.size(), 0);
    for (;;) {
        std::vector<std::int64_t> v(nvar, 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
            if (coef[b])
                for (std::size_t j = 0; j < nvar; ++j) v[j] = (v[j] + coef[b] * basis[b][j]) % p;
        bool idem = true, zero = true, one = true;
        for (int q = 0; q < d.npoints() && idem; ++q) {
            std::size_t n = m.dims[uz(q)];
            Mat e(p, n, n);
            for (std::size_t i = 0; i < n * n; ++i) e.a[i] = v[off[uz(q)] + i];
            idem = mul(e, e) == e;
            zero = zero && e.is_zero();
            one = one && e == identity(p, n);
        }
        if (idem && !zero && !one) return false;
        std::size_t k = 0;
        while (k < coef.size() && ++coef[k] == p) coef[k++] = 0;
        if (k == coef.size()) break;
    }
    return true;
}

bool isomorphic_by_enumeration(const Dit& d, const Rep& m, const Rep& n) {
    require_trivial(d);
    if (m.dims != n.dims) return false;
    for (const auto& e : d.delta)
        if (!e.is_zero()) throw std::invalid_argument("oracle: δ = 0 only");
    std::int64_t p = d.field().characteristic();
    std::size_t nvar = 0;
    for (auto k : m.dims) nvar += k * k;
    double count = 1;
    for (std::size_t k = 0; k < nvar; ++k) count *= static_cast<double>(p);
    if (count > 5e6) throw std::invalid_argument("oracle: dimension too large to enumerate");
    auto M = from_rep_maps(m), N = from_rep_maps(n);
    std::vector<std::int64_t> digits(nvar, 0);
    for (;;) {
        std::vector<Mat> f;
        std::size_t at = 0;
        bool ok = true;
        for (int q = 0; q < d.npoints() && ok; ++q) {
            std::size_t k = m.dims[uz(q)];
            Mat x(p, k, k);
            for (std::size_t i = 0; i < k * k; ++i) x.a[i] = digits[at++];
            ok = rank(x) == k;
            f.push_back(x);
        }
        for (int a = 0; a < d.narrows() && ok; ++a) {
            const Arrow& ar = d.layer.arrow(a);
            if (ar.dashed) continue;
            ok = mul(N[uz(a)], f[uz(ar.s)]) == mul(f[uz(ar.t)], M[uz(a)]);
        }
        if (ok) return true;
        std::size_t k = 0;
        while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
        if (k == digits.size()) break;
    }
    return false;
}

namespace {

Mat eval_at(const PolyMatrix& m, std::int64_t p, std::int64_t lambda) {
    Mat o(p, m.rows(), m.cols());
    Scalar l = m.field()(lambda);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) o(i, j) = md(m(i, j).eval(l).residue(), p);
    return o;
}

Mat hcat(const Mat& a, const Mat& b) {
    Mat o(a.p, a.r, a.c + b.c);
    for (std::size_t i = 0; i < a.r; ++i) {
        for (std::size_t j = 0; j < a.c; ++j) o(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.c; ++j) o(i, a.c + j) = b(i, j);
    }
    return o;
}

std::size_t generic_rank(const PolyMatrix& m) { return m.cols() ? m.over_function_field().rank() : 0; }

}  // namespace

LocalizationCheck check_localization(const ModulePresentation& u, const std::vector<PolyMatrix>& filtration,
                                     const Localization& loc) {
    LocalizationCheck out;
    const Field& F = u.field;
    std::int64_t p = F.characteristic();
    std::size_t n = u.generators;
    std::vector<PolyMatrix> cumulative;
    PolyMatrix acc(F, n, 0);
    for (const auto& g : filtration) {
        acc = acc.hstack(g);
        cumulative.push_back(acc);
    }
    cumulative.push_back(PolyMatrix::identity(F, n));
    auto fail = [&](const std::string& why) {
        out.ok = false;
        if (out.failure.empty()) out.failure = why;
    };
    if (loc.bases.size() != cumulative.size()) {
        fail("expected one basis per layer");
        return out;
    }
    for (std::size_t i = 0; i + 1 < loc.bases.size(); ++i) {
        const PolyMatrix& a = loc.bases[i];
        const PolyMatrix& b = loc.bases[i + 1];
        if (a.cols() > b.cols() || !(b.block(0, 0, n, a.cols()) == a)) fail("bases are not nested");
    }
    // Generic fibre.
    std::size_t rr = generic_rank(u.relations);
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        const PolyMatrix& B = loc.bases[i];
        std::size_t rb = generic_rank(B.hstack(u.relations));
        if (rb - rr != B.cols()) fail("layer " + std::to_string(i) + ": generic basis is dependent");
        if (generic_rank(cumulative[i].hstack(u.relations)) != rb ||
            generic_rank(B.hstack(cumulative[i]).hstack(u.relations)) != rb)
            fail("layer " + std::to_string(i) + ": generic basis does not span");
    }
    if (loc.bases.back().cols() != n - rr) fail("U has the wrong rank");
    // Every rational point where g·h is a unit.
    Poly gh = loc.h;
    if (!u.inverted.is_zero()) gh = gh * u.inverted;
    for (std::int64_t l = 0; l < p; ++l) {
        if (gh.eval(F(l)).is_zero()) continue;
        ++out.points_checked;
        Mat R = eval_at(u.relations, p, l);
        std::size_t r0 = rank(R);
        for (std::size_t i = 0; i < cumulative.size(); ++i) {
            Mat B = eval_at(loc.bases[i], p, l), G = eval_at(cumulative[i], p, l);
            std::size_t rb = rank(hcat(B, R));
            std::string at = "layer " + std::to_string(i) + " at x = " + std::to_string(l);
            if (rb - r0 != B.c) fail(at + ": basis is dependent in the fibre");
            if (rank(hcat(G, R)) != rb || rank(hcat(hcat(B, G), R)) != rb) fail(at + ": basis does not span the fibre");
        }
        if (n - r0 != loc.bases.back().cols()) fail("fibre of U has the wrong dimension at x = " + std::to_string(l));
    }
    return out;
}

}  // namespace ditalg::oracle
