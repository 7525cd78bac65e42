#include "ditalg/minalg.hpp"

#include <algorithm>

namespace ditalg {

Factor Factor::localized(std::vector<Poly> inv) {
    Factor f{true, {}};
    for (auto& p : inv) {
        if (p.degree() <= 0) continue;
        Poly m = p.monic();
        bool dup = false;
        for (auto& q : f.inverted) dup = dup || q == m;
        if (!dup) f.inverted.push_back(m);
    }
    std::sort(f.inverted.begin(), f.inverted.end(), [](const Poly& a, const Poly& b) { return a.less(b); });
    return f;
}

Poly Factor::h(const Field& f) const {
    Poly r = Poly::constant(f, f.one());
    for (const auto& p : inverted) r = r * p;
    return r;
}

bool Factor::operator==(const Factor& o) const {
    if (rational != o.rational || inverted.size() != o.inverted.size()) return false;
    for (std::size_t i = 0; i < inverted.size(); ++i)
        if (inverted[i] != o.inverted[i]) return false;
    return true;
}

std::string Factor::to_string() const {
    if (!rational) return "k";
    std::string s = "k[x]";
    if (!inverted.empty()) {
        s += "_{";
        for (std::size_t i = 0; i < inverted.size(); ++i) s += (i ? "," : "") + inverted[i].to_string();
        s += "}";
    }
    return s;
}

FactorRing::FactorRing(Field f, Factor fac) : F_(f), fac_(std::move(fac)), h_(fac_.h(f)) {}

LocalElem FactorRing::value(const Deco& d) const {
    if (!fac_.rational) return {Poly::constant(F_, F_.one()), 0};
    return {Poly::monomial(F_, d.r, F_.one()), d.n};
}

DecoSum FactorRing::expand(const LocalElem& e) const {
    DecoSum out;
    if (!fac_.rational) {
        if (e.num.degree() > 0) throw ArithmeticError("non-constant coefficient at a trivial point");
        Scalar c = e.num.coeff(0);
        if (!c.is_zero()) out.push_back({Deco{0, 0}, c});
        return out;
    }
    Poly num = e.num;
    int n = e.n;
    if (h_.degree() <= 0) n = 0;
    for (int k = n; k >= 1; --k) {
        auto [q, r] = num.divmod(h_);
        for (int i = 0; i <= r.degree(); ++i)
            if (!r.coeff(i).is_zero()) out.push_back({Deco{i, k}, r.coeff(i)});
        num = q;
    }
    for (int i = 0; i <= num.degree(); ++i)
        if (!num.coeff(i).is_zero()) out.push_back({Deco{i, 0}, num.coeff(i)});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

LocalElem FactorRing::from_fraction(const Poly& num, const Poly& den) const {
    if (den.is_zero()) throw ArithmeticError("zero denominator");
    Poly g = gcd(num, den);
    Poly n = num.is_zero() ? num : num / g;
    Poly d = num.is_zero() ? Poly::constant(F_, F_.one()) : den / g;
    if (d.degree() == 0) return {n * d.lead().inverse(), 0};
    if (!fac_.rational) throw ArithmeticError("fraction at a trivial point");
    Poly hp = Poly::constant(F_, F_.one());
    for (int k = 1; k <= 64; ++k) {
        hp = hp * h_;
        auto [q, r] = hp.divmod(d);
        if (r.is_zero()) return {n * q, k};
    }
    throw ArithmeticError("denominator " + den.to_string() + " is not invertible in " + fac_.to_string());
}

LocalElem FactorRing::parse(const std::string& text) const {
    Scalar s = Field::function_field(F_).parse(text);
    const RatFun& f = s.ratfun();
    if (!fac_.rational && (f.num.degree() > 0 || f.den.degree() > 0))
        throw ArithmeticError("'" + text + "' is not a scalar");
    return from_fraction(f.num, f.den);
}

LocalElem FactorRing::combine(const DecoSum& s) const {
    int n = 0;
    for (auto& [d, c] : s) n = std::max(n, d.n);
    Poly num(F_);
    for (auto& [d, c] : s) {
        if (!fac_.rational) {
            num += Poly::constant(F_, c);
            continue;
        }
        num += Poly::monomial(F_, d.r, c) * h_.pow(n - d.n);
    }
    return {num, n};
}

DecoSum FactorRing::mul(const Deco& a, const Deco& b) const {
    if (!fac_.rational) return {{Deco{0, 0}, F_.one()}};
    auto key = std::make_pair(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    DecoSum r = expand({Poly::monomial(F_, a.r + b.r, F_.one()), a.n + b.n});
    cache_.emplace(key, r);
    return r;
}

Matrix FactorRing::act(const Deco& d, const Matrix& x) const {
    std::size_t n = x.rows();
    if (!fac_.rational || (d.r == 0 && d.n == 0)) return Matrix::identity(x.field(), n);
    Matrix m = x.pow(d.r);
    if (d.n > 0) {
        auto inv = eval_poly(h_, x).inverse();
        if (!inv) throw ArithmeticError("h(X) is not invertible");
        m = m * inv->pow(d.n);
    }
    return m;
}

Matrix FactorRing::act(const LocalElem& e, const Matrix& x) const {
    Matrix m = eval_poly(e.num, x);
    if (e.n > 0 && fac_.rational && h_.degree() > 0) {
        auto inv = eval_poly(h_, x).inverse();
        if (!inv) throw ArithmeticError("h(X) is not invertible");
        m = m * inv->pow(e.n);
    }
    return m;
}

bool FactorRing::admissible_operator(const Matrix& x) const {
    for (const auto& p : fac_.inverted)
        if (!eval_poly(p, x).inverse()) return false;
    return true;
}

std::string FactorRing::deco_string(const Deco& d) const { return elem_string(value(d)); }

std::string FactorRing::elem_string(const LocalElem& e) const {
    if (e.n == 0 || !fac_.rational || h_.degree() <= 0) return e.num.to_string();
    std::string n = e.num.to_string();
    if (n.find_first_of("+-", 1) != std::string::npos) n = "(" + n + ")";
    std::string hs = h_.to_string();
    if (hs.find_first_of("+-*", 1) != std::string::npos) hs = "(" + hs + ")";
    return n + "/" + hs + (e.n > 1 ? "^" + std::to_string(e.n) : "");
}

}  // namespace ditalg
