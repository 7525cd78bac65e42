#include <algorithm>
#include <cctype>
#include <map>

#include "ditalg/matrix.hpp"
#include "ditalg/scalar.hpp"

namespace ditalg {

Poly::Poly(Field f, std::vector<Scalar> coeffs) : F_(f), c_(std::move(coeffs)) {
    for (auto& c : c_) c = F_.coerce(c);
    trim();
}

Poly Poly::constant(Field f, const Scalar& c) { return Poly(f, {c}); }
Poly Poly::x(Field f) { return Poly(f, {f.zero(), f.one()}); }

Poly Poly::monomial(Field f, int deg, const Scalar& c) {
    std::vector<Scalar> v(static_cast<std::size_t>(deg) + 1, f.zero());
    v[static_cast<std::size_t>(deg)] = c;
    return Poly(f, std::move(v));
}

Poly Poly::linear(Field f, const Scalar& root) { return Poly(f, {-f.coerce(root), f.one()}); }

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return F_.zero();
    return c_[static_cast<std::size_t>(i)];
}

Scalar Poly::lead() const { return c_.empty() ? F_.zero() : c_.back(); }

Poly Poly::operator+(const Poly& o) const {
    std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), F_.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
    return Poly(F_, std::move(r));
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(F_);
    std::vector<Scalar> r(c_.size() + o.c_.size() - 1, F_.zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return Poly(F_, std::move(r));
}

Poly Poly::operator*(const Scalar& s) const {
    std::vector<Scalar> r = c_;
    for (auto& c : r) c = c * s;
    return Poly(F_, std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
    if (degree() < d.degree()) return {Poly(F_), *this};
    std::vector<Scalar> rem = c_;
    std::vector<Scalar> q(c_.size() - d.c_.size() + 1, F_.zero());
    Scalar li = d.lead().inverse();
    for (int i = degree(); i >= d.degree(); --i) {
        Scalar c = rem[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        Scalar f = c * li;
        std::size_t shift = static_cast<std::size_t>(i - d.degree());
        q[shift] = f;
        for (std::size_t j = 0; j < d.c_.size(); ++j) rem[shift + j] = rem[shift + j] - f * d.c_[j];
    }
    return {Poly(F_, std::move(q)), Poly(F_, std::move(rem))};
}

bool Poly::divides(const Poly& o) const { return (o % *this).is_zero(); }

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * lead().inverse();
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(F_);
    std::vector<Scalar> r(c_.size() - 1, F_.zero());
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F_(static_cast<std::int64_t>(i));
    return Poly(F_, std::move(r));
}

Poly Poly::pow(int e) const {
    Poly r = constant(F_, F_.one()), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Poly Poly::powmod(std::int64_t e, const Poly& m) const {
    Poly r = constant(F_, F_.one()) % m, b = *this % m;
    while (e > 0) {
        if (e & 1) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

Scalar Poly::eval(const Scalar& s) const {
    Scalar r = F_.zero();
    for (std::size_t i = c_.size(); i-- > 0;) r = r * s + c_[i];
    return r;
}

Poly Poly::compose(const Poly& inner) const {
    Poly r(F_);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * inner + constant(F_, c_[i]);
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

static bool scalar_less(const Scalar& a, const Scalar& b) {
    if (a == b) return false;
    if (a.is_loose() || a.field().is_prime()) return a.residue() < b.residue();
    if (a.field().is_rational()) return a.rational_value() < b.rational_value();
    return a.to_string() < b.to_string();
}

bool Poly::less(const Poly& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i) {
        Scalar a = coeff(i), b = o.coeff(i);
        if (a != b) return scalar_less(a, b);
    }
    return false;
}

std::string Poly::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    bool composite = F_.is_function();
    for (int i = degree(); i >= 0; --i) {
        Scalar c = c_[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        std::string cs = c.to_string();
        bool neg = !composite && !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (composite && cs.find_first_of("+-/", 1) != std::string::npos) cs = "(" + cs + ")";
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? "-" : "+";
        }
        std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
        if (i == 0)
            out += cs;
        else if (cs == "1")
            out += mono;
        else
            out += cs + "*" + mono;
    }
    return out;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = y;
        y = r;
    }
    return x.monic();
}

XGcd xgcd(const Poly& a, const Poly& b) {
    const Field& F = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(F, F.one()), s1(F);
    Poly t0(F), t1 = Poly::constant(F, F.one());
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = r1;
        r1 = r;
        Poly s = s0 - q * s1;
        s0 = s1;
        s1 = s;
        Poly t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Scalar li = r0.lead().inverse();
    return {r0 * li, s0 * li, t0 * li};
}

Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    return ((a * b) / gcd(a, b)).monic();
}

// ---------------------------------------------------------------- factoring

namespace {

// Square-free decomposition: returns (g_i, i) with f = prod g_i^i (monic f).
std::vector<std::pair<Poly, int>> squarefree(const Poly& f) {
    const Field& F = f.field();
    std::vector<std::pair<Poly, int>> out;
    std::int64_t p = F.characteristic();
    Poly df = f.derivative();
    if (df.is_zero()) {
        // f = g(x^p); over F_p, g(x^p) = (g')^p with coefficientwise identity.
        std::vector<Scalar> root;
        for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) root.push_back(f.coeff(i));
        for (auto& [g, m] : squarefree(Poly(F, root))) out.push_back({g, m * static_cast<int>(p)});
        return out;
    }
    Poly c = gcd(f, df);
    Poly w = f / c;
    int i = 1;
    while (!w.is_constant()) {
        Poly y = gcd(w, c);
        Poly z = w / y;
        if (!z.is_constant()) out.push_back({z.monic(), i});
        ++i;
        w = y;
        c = c / y;
    }
    if (!c.is_constant()) {
        // Remaining part is a p-th power (char p only).
        std::vector<Scalar> root;
        for (int k = 0; k <= c.degree(); k += static_cast<int>(p)) root.push_back(c.coeff(k));
        for (auto& [g, m] : squarefree(Poly(F, root))) out.push_back({g, m * static_cast<int>(p)});
    }
    return out;
}

// Berlekamp splitting of a monic square-free polynomial over F_p.
std::vector<Poly> berlekamp(const Poly& f) {
    const Field& F = f.field();
    int n = f.degree();
    if (n <= 1) return {f};
    std::int64_t p = F.characteristic();
    Matrix Q(F, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    Poly xp = Poly::x(F).powmod(p, f);
    Poly cur = Poly::constant(F, F.one());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) Q(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = cur.coeff(j);
        cur = (cur * xp) % f;
    }
    Matrix K = (Q - Matrix::identity(F, static_cast<std::size_t>(n))).kernel();
    std::size_t r = K.cols();
    std::vector<Poly> factors{f};
    if (r == 1) return factors;
    for (std::size_t k = 0; k < r && factors.size() < r; ++k) {
        std::vector<Scalar> v;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) v.push_back(K(i, k));
        Poly vp(F, v);
        if (vp.is_constant()) continue;
        std::vector<Poly> next;
        for (const Poly& u : factors) {
            if (u.degree() <= 1) {
                next.push_back(u);
                continue;
            }
            std::vector<Poly> pieces{u};
            for (std::int64_t s = 0; s < p; ++s) {
                std::vector<Poly> refined;
                for (const Poly& w : pieces) {
                    Poly g = gcd(w, vp - Poly::constant(F, F(s)));
                    if (!g.is_constant() && g.degree() < w.degree()) {
                        refined.push_back(g);
                        refined.push_back((w / g).monic());
                    } else {
                        refined.push_back(w);
                    }
                }
                pieces = refined;
            }
            for (auto& w : pieces) next.push_back(w);
        }
        factors = next;
    }
    return factors;
}

std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> out;
    if (n == 0) return out;
    if (n > 100000000) throw ArithmeticError("rational root search: coefficient too large");
    long v = n.get_si();
    for (long d = 1; d * d <= v; ++d)
        if (v % d == 0) {
            out.push_back(d);
            if (d != v / d) out.push_back(v / d);
        }
    return out;
}

std::vector<Poly> rational_split(const Poly& f) {
    const Field& F = f.field();
    std::vector<Poly> out;
    Poly g = f;
    while (g.degree() >= 1) {
        if (g.coeff(0).is_zero()) {
            out.push_back(Poly::x(F));
            g = g / Poly::x(F);
            continue;
        }
        mpz_class l = 1;
        for (const auto& c : g.coeffs()) l = lcm(l, mpz_class(c.rational_value().get_den()));
        std::vector<mpz_class> ic;
        for (const auto& c : g.coeffs()) ic.push_back(mpz_class(c.rational_value() * l));
        bool found = false;
        for (const auto& a : divisors(ic.front())) {
            for (const auto& b : divisors(ic.back())) {
                for (int sgn : {1, -1}) {
                    Scalar r = Scalar::rational(mpq_class(a * sgn, b));
                    if (g.eval(r).is_zero()) {
                        out.push_back(Poly::linear(F, r));
                        g = (g / Poly::linear(F, r)).monic();
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    if (g.degree() >= 4)
        throw ArithmeticError("factorization over Q of degree >= 4 without rational roots is unsupported: " +
                              g.to_string());
    if (g.degree() >= 1) out.push_back(g.monic());
    return out;
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& f) {
    if (f.is_zero()) throw ArithmeticError("cannot factor the zero polynomial");
    const Field& F = f.field();
    if (F.is_function()) throw ArithmeticError("factorization over function fields is unsupported");
    std::map<std::string, std::pair<Poly, int>> acc;
    std::vector<std::pair<Poly, int>> out;
    if (f.degree() == 0) return out;
    for (auto& [g, m] : squarefree(f.monic())) {
        std::vector<Poly> parts = F.is_prime() ? berlekamp(g) : rational_split(g);
        for (auto& q : parts) {
            bool merged = false;
            for (auto& [h, k] : out)
                if (h == q) {
                    k += m;
                    merged = true;
                }
            if (!merged) out.push_back({q.monic(), m});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first.less(b.first); });
    return out;
}

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) return false;
    auto fs = factor(f);
    return fs.size() == 1 && fs[0].second == 1;
}

std::vector<Poly> monic_irreducibles(const Field& F, int degree) {
    if (!F.is_prime()) throw ArithmeticError("irreducible enumeration needs a prime field");
    std::int64_t p = F.characteristic();
    std::int64_t total = 1;
    for (int i = 0; i < degree; ++i) {
        total *= p;
        if (total > 2000000) throw ArithmeticError("irreducible enumeration too large");
    }
    std::vector<Poly> out;
    for (std::int64_t code = 0; code < total; ++code) {
        std::vector<Scalar> c;
        std::int64_t t = code;
        for (int i = 0; i < degree; ++i) {
            c.push_back(F(t % p));
            t /= p;
        }
        c.push_back(F.one());
        Poly q(F, c);
        if (is_irreducible(q)) out.push_back(q);
    }
    return out;
}

std::vector<Scalar> roots_in_field(const Poly& f) {
    std::vector<Scalar> out;
    if (f.is_zero()) throw ArithmeticError("zero polynomial has every root");
    for (auto& [q, m] : factor(f))
        if (q.degree() == 1) out.push_back(-q.coeff(0));
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Frac {
    Poly n, d;
};

class ExprParser {
public:
    ExprParser(const Field& base, const std::string& s) : F(base), s_(s) {}

    Frac parse() {
        Frac r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return r;
    }

private:
    const Field& F;
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ArithmeticError("cannot parse '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    Frac one() { return {Poly::constant(F, F.one()), Poly::constant(F, F.one())}; }
    Frac add(const Frac& a, const Frac& b, bool sub) {
        Poly n = sub ? a.n * b.d - b.n * a.d : a.n * b.d + b.n * a.d;
        return {n, a.d * b.d};
    }
    Frac expr() {
        bool neg = false;
        if (peek('-')) {
            ++pos_;
            neg = true;
        } else if (peek('+')) {
            ++pos_;
        }
        Frac r = term();
        if (neg) r.n = -r.n;
        while (peek('+') || peek('-')) {
            bool sub = s_[pos_] == '-';
            ++pos_;
            r = add(r, term(), sub);
        }
        return r;
    }
    Frac term() {
        Frac r = power();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                Frac b = power();
                r = {r.n * b.n, r.d * b.d};
            } else if (peek('/')) {
                ++pos_;
                Frac b = power();
                if (b.n.is_zero()) fail("division by zero");
                r = {r.n * b.d, r.d * b.n};
            } else if (peek('x') || peek('(')) {
                Frac b = power();
                r = {r.n * b.n, r.d * b.d};
            } else {
                return r;
            }
        }
    }
    Frac power() {
        Frac b = primary();
        if (peek('^')) {
            ++pos_;
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            int e = std::stoi(s_.substr(start, pos_ - start));
            return {b.n.pow(e), b.d.pow(e)};
        }
        return b;
    }
    Frac primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Frac r = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return r;
        }
        if (c == 'x') {
            ++pos_;
            return {Poly::x(F), Poly::constant(F, F.one())};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            mpz_class v(s_.substr(start, pos_ - start));
            Scalar sv;
            if (F.is_prime()) {
                mpz_class m = v % mpz_class(static_cast<long>(F.characteristic()));
                sv = F(m.get_si());
            } else {
                sv = Scalar::rational(mpq_class(v));
            }
            return {Poly::constant(F, sv), Poly::constant(F, F.one())};
        }
        fail(std::string("unexpected '") + c + "'");
    }
};

}  // namespace

Poly parse_poly(const Field& f, const std::string& text) {
    Field base = f.base();
    Frac r = ExprParser(base, text).parse();
    if (r.d.degree() != 0) throw ArithmeticError("'" + text + "' is not a polynomial");
    return r.n * r.d.lead().inverse();
}

Scalar Field::parse(const std::string& text) const {
    Field b = base();
    Frac r = ExprParser(b, text).parse();
    if (r.d.is_zero()) throw ArithmeticError("'" + text + "' has zero denominator");
    if (kind_ == Kind::Function) return Scalar::function(RatFun(r.n, r.d));
    if (r.n.degree() > 0 || r.d.degree() > 0) throw ArithmeticError("'" + text + "' is not a constant of " + name());
    return r.n.coeff(0) / r.d.coeff(0);
}

}  // namespace ditalg
