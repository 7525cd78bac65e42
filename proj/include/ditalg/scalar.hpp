// Exact scalars: prime fields, the rationals, and rational function fields k(x).
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ditalg {

class Scalar;
class Poly;
struct RatFun;

struct ArithmeticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Field {
public:
    enum class Kind : std::uint8_t { Prime, Rational, Function };

    static Field prime(std::int64_t p);
    static Field rationals();
    static Field function_field(const Field& base);

    Kind kind() const { return kind_; }
    // Characteristic for Prime and Function-over-F_p; 0 otherwise.
    std::int64_t characteristic() const { return p_; }
    bool is_prime() const { return kind_ == Kind::Prime; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    bool is_function() const { return kind_ == Kind::Function; }
    bool is_finite() const { return kind_ == Kind::Prime; }
    Field base() const;

    Scalar zero() const;
    Scalar one() const;
    Scalar operator()(std::int64_t v) const;
    Scalar fraction(std::int64_t num, std::int64_t den) const;
    // The transcendental x of a function field.
    Scalar variable() const;
    // Embeds s (of this field, its base, or an integer literal).
    Scalar coerce(const Scalar& s) const;
    Scalar parse(const std::string& text) const;

    std::string name() const;
    bool operator==(const Field& o) const { return kind_ == o.kind_ && p_ == o.p_; }
    bool operator!=(const Field& o) const { return !(*this == o); }

private:
    Field(Kind k, std::int64_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::int64_t p_;
};

bool is_prime_number(std::int64_t n);

// A field element. Integer literals (Scalar(int)) are "loose" and adopt the
// field of whatever they are combined with.
class Scalar {
public:
    Scalar() = default;
    Scalar(std::int64_t v) : v_(v) {}  // NOLINT: literals are deliberately implicit
    Scalar(int v) : v_(v) {}           // NOLINT

    static Scalar prime(std::int64_t p, std::int64_t v);
    static Scalar rational(const mpq_class& q);
    static Scalar function(const RatFun& f);

    bool is_loose() const { return tag_ == Tag::Loose; }
    bool is_zero() const;
    bool is_one() const;
    // Field of a non-loose scalar.
    Field field() const;

    std::int64_t residue() const { return v_; }
    const mpq_class& rational_value() const { return *q_; }
    const RatFun& ratfun() const { return *f_; }
    std::int64_t loose_value() const { return v_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
    Scalar inverse() const;
    Scalar pow(std::int64_t e) const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    enum class Tag : std::uint8_t { Loose, Prime, Rational, Function };
    friend class Field;
    friend std::pair<Scalar, Scalar> unify(const Scalar&, const Scalar&);

    Tag tag_ = Tag::Loose;
    std::int64_t p_ = 0;
    std::int64_t v_ = 0;
    std::shared_ptr<const mpq_class> q_;
    std::shared_ptr<const RatFun> f_;
};

std::pair<Scalar, Scalar> unify(const Scalar& a, const Scalar& b);

std::int64_t mod_inverse(std::int64_t a, std::int64_t p);

// Univariate polynomial in x with coefficients in a field, ascending order.
class Poly {
public:
    explicit Poly(Field f) : F_(f) {}
    Poly(Field f, std::vector<Scalar> coeffs);
    static Poly constant(Field f, const Scalar& c);
    static Poly x(Field f);
    static Poly monomial(Field f, int deg, const Scalar& c);
    // Product of (x - r).
    static Poly linear(Field f, const Scalar& root);

    const Field& field() const { return F_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    Scalar coeff(int i) const;
    const std::vector<Scalar>& coeffs() const { return c_; }
    Scalar lead() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Scalar& s) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }
    bool divides(const Poly& o) const;
    Poly monic() const;
    Poly derivative() const;
    Poly pow(int e) const;
    Poly powmod(std::int64_t e, const Poly& m) const;
    Scalar eval(const Scalar& s) const;
    Poly compose(const Poly& inner) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
    // Total order used for canonical sorting: degree, then coefficients.
    bool less(const Poly& o) const;

    std::string to_string() const;

private:
    void trim();
    Field F_;
    std::vector<Scalar> c_;
};

Poly gcd(const Poly& a, const Poly& b);
// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
struct XGcd {
    Poly g, s, t;
};
XGcd xgcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);

// Monic irreducible factorization with multiplicities, sorted canonically.
// Over F_p this is complete (Berlekamp). Over Q, linear factors are found
// exactly; a remaining cofactor of degree <= 3 is irreducible, a larger one
// raises ArithmeticError.
std::vector<std::pair<Poly, int>> factor(const Poly& f);
bool is_irreducible(const Poly& f);
// All monic irreducible polynomials of the given degree over F_p.
std::vector<Poly> monic_irreducibles(const Field& f, int degree);
// Roots lying in the coefficient field.
std::vector<Scalar> roots_in_field(const Poly& f);

Poly parse_poly(const Field& f, const std::string& text);

// Element of the rational function field k(x), normalized so that den is
// monic and gcd(num, den) = 1.
struct RatFun {
    Poly num;
    Poly den;
    RatFun(Poly n, Poly d);
    bool is_zero() const { return num.is_zero(); }
    Scalar eval(const Scalar& at) const;
    std::string to_string() const;
};

}  // namespace ditalg
