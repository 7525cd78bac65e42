#include "ditalg/scalar.hpp"

#include <sstream>

namespace ditalg {

bool is_prime_number(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    if (nr == 0) throw ArithmeticError("division by zero in F_" + std::to_string(p));
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return t < 0 ? t + p : t;
}

static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

// ---------------------------------------------------------------- Field

Field Field::prime(std::int64_t p) {
    if (!is_prime_number(p)) throw ArithmeticError("modulus " + std::to_string(p) + " is not prime");
    return Field(Kind::Prime, p);
}

Field Field::rationals() { return Field(Kind::Rational, 0); }

Field Field::function_field(const Field& base) {
    if (base.is_function()) throw ArithmeticError("nested function fields are not supported");
    return Field(Kind::Function, base.characteristic());
}

Field Field::base() const {
    if (kind_ != Kind::Function) return *this;
    return p_ == 0 ? rationals() : Field(Kind::Prime, p_);
}

Scalar Field::zero() const { return (*this)(0); }
Scalar Field::one() const { return (*this)(1); }

Scalar Field::operator()(std::int64_t v) const {
    switch (kind_) {
        case Kind::Prime:
            return Scalar::prime(p_, ((v % p_) + p_) % p_);
        case Kind::Rational:
            return Scalar::rational(mpq_class(static_cast<long>(v)));
        case Kind::Function: {
            Field b = base();
            return Scalar::function(RatFun(Poly::constant(b, b(v)), Poly::constant(b, b.one())));
        }
    }
    return Scalar();
}

Scalar Field::fraction(std::int64_t num, std::int64_t den) const { return (*this)(num) / (*this)(den); }

Scalar Field::variable() const {
    if (kind_ != Kind::Function) throw ArithmeticError("field " + name() + " has no transcendental");
    Field b = base();
    return Scalar::function(RatFun(Poly::x(b), Poly::constant(b, b.one())));
}

Scalar Field::coerce(const Scalar& s) const {
    if (s.is_loose()) return (*this)(s.loose_value());
    Field sf = s.field();
    if (sf == *this) return s;
    if (kind_ == Kind::Function && sf == base()) {
        Field b = base();
        return Scalar::function(RatFun(Poly::constant(b, s), Poly::constant(b, b.one())));
    }
    throw ArithmeticError("cannot embed element of " + sf.name() + " into " + name());
}

std::string Field::name() const {
    switch (kind_) {
        case Kind::Prime:
            return "F" + std::to_string(p_);
        case Kind::Rational:
            return "Q";
        case Kind::Function:
            return base().name() + "(x)";
    }
    return "?";
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::prime(std::int64_t p, std::int64_t v) {
    Scalar s;
    s.tag_ = Tag::Prime;
    s.p_ = p;
    s.v_ = v;
    return s;
}

Scalar Scalar::rational(const mpq_class& q) {
    Scalar s;
    s.tag_ = Tag::Rational;
    mpq_class c = q;
    c.canonicalize();
    s.q_ = std::make_shared<const mpq_class>(c);
    return s;
}

Scalar Scalar::function(const RatFun& f) {
    Scalar s;
    s.tag_ = Tag::Function;
    s.p_ = f.num.field().characteristic();
    s.f_ = std::make_shared<const RatFun>(f);
    return s;
}

Field Scalar::field() const {
    switch (tag_) {
        case Tag::Prime:
            return Field::prime(p_);
        case Tag::Rational:
            return Field::rationals();
        case Tag::Function:
            return Field::function_field(f_->num.field());
        case Tag::Loose:
            break;
    }
    throw ArithmeticError("integer literal has no field");
}

bool Scalar::is_zero() const {
    switch (tag_) {
        case Tag::Loose:
        case Tag::Prime:
            return v_ == 0;
        case Tag::Rational:
            return sgn(*q_) == 0;
        case Tag::Function:
            return f_->num.is_zero();
    }
    return false;
}

bool Scalar::is_one() const {
    switch (tag_) {
        case Tag::Loose:
        case Tag::Prime:
            return v_ == 1;
        case Tag::Rational:
            return *q_ == 1;
        case Tag::Function:
            return f_->num.is_one() && f_->den.is_one();
    }
    return false;
}

std::pair<Scalar, Scalar> unify(const Scalar& a, const Scalar& b) {
    using Tag = Scalar::Tag;
    if (a.tag_ == b.tag_) {
        if (a.tag_ == Tag::Prime && a.p_ != b.p_)
            throw ArithmeticError("mixing F_" + std::to_string(a.p_) + " and F_" + std::to_string(b.p_));
        if (a.tag_ == Tag::Function && a.p_ != b.p_) throw ArithmeticError("mixing function fields");
        return {a, b};
    }
    if (a.tag_ == Tag::Loose) return {b.field().coerce(a), b};
    if (b.tag_ == Tag::Loose) return {a, a.field().coerce(b)};
    if (a.tag_ == Tag::Function) return {a, a.field().coerce(b)};
    if (b.tag_ == Tag::Function) return {b.field().coerce(a), b};
    throw ArithmeticError("mixing " + a.field().name() + " and " + b.field().name());
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (tag_ == Tag::Prime && o.tag_ == Tag::Prime && p_ == o.p_) {
        std::int64_t r = v_ + o.v_;
        return prime(p_, r >= p_ ? r - p_ : r);
    }
    auto [a, b] = unify(*this, o);
    switch (a.tag_) {
        case Tag::Loose:
            return Scalar(a.v_ + b.v_);
        case Tag::Prime: {
            std::int64_t r = a.v_ + b.v_;
            return prime(a.p_, r >= a.p_ ? r - a.p_ : r);
        }
        case Tag::Rational:
            return rational(*a.q_ + *b.q_);
        case Tag::Function: {
            const RatFun& x = *a.f_;
            const RatFun& y = *b.f_;
            return function(RatFun(x.num * y.den + y.num * x.den, x.den * y.den));
        }
    }
    return Scalar();
}

Scalar Scalar::operator-() const {
    switch (tag_) {
        case Tag::Loose:
            return Scalar(-v_);
        case Tag::Prime:
            return prime(p_, v_ == 0 ? 0 : p_ - v_);
        case Tag::Rational:
            return rational(-*q_);
        case Tag::Function:
            return function(RatFun(-f_->num, f_->den));
    }
    return Scalar();
}

Scalar Scalar::operator-(const Scalar& o) const {
    if (tag_ == Tag::Prime && o.tag_ == Tag::Prime && p_ == o.p_) {
        std::int64_t r = v_ - o.v_;
        return prime(p_, r < 0 ? r + p_ : r);
    }
    return *this + (-o);
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (tag_ == Tag::Prime && o.tag_ == Tag::Prime && p_ == o.p_) return prime(p_, mulmod(v_, o.v_, p_));
    auto [a, b] = unify(*this, o);
    switch (a.tag_) {
        case Tag::Loose:
            return Scalar(a.v_ * b.v_);
        case Tag::Prime:
            return prime(a.p_, mulmod(a.v_, b.v_, a.p_));
        case Tag::Rational:
            return rational(*a.q_ * *b.q_);
        case Tag::Function:
            return function(RatFun(a.f_->num * b.f_->num, a.f_->den * b.f_->den));
    }
    return Scalar();
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    switch (tag_) {
        case Tag::Loose:
            if (v_ == 1 || v_ == -1) return *this;
            throw ArithmeticError("integer literal " + std::to_string(v_) + " has no field inverse");
        case Tag::Prime:
            return prime(p_, mod_inverse(v_, p_));
        case Tag::Rational:
            return rational(1 / *q_);
        case Tag::Function:
            return function(RatFun(f_->den, f_->num));
    }
    return Scalar();
}

Scalar Scalar::operator/(const Scalar& o) const {
    auto [a, b] = unify(*this, o);
    if (a.tag_ == Tag::Loose) {
        if (b.v_ == 0) throw ArithmeticError("division by zero");
        if (a.v_ % b.v_ != 0) throw ArithmeticError("inexact division of integer literals");
        return Scalar(a.v_ / b.v_);
    }
    return a * b.inverse();
}

Scalar Scalar::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar base = *this;
    Scalar r = tag_ == Tag::Loose ? Scalar(1) : field().one();
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    if (tag_ == Tag::Prime && o.tag_ == Tag::Prime) return p_ == o.p_ && v_ == o.v_;
    auto [a, b] = unify(*this, o);
    switch (a.tag_) {
        case Tag::Loose:
        case Tag::Prime:
            return a.v_ == b.v_;
        case Tag::Rational:
            return *a.q_ == *b.q_;
        case Tag::Function:
            return a.f_->num == b.f_->num && a.f_->den == b.f_->den;
    }
    return false;
}

std::string Scalar::to_string() const {
    switch (tag_) {
        case Tag::Loose:
        case Tag::Prime:
            return std::to_string(v_);
        case Tag::Rational:
            return q_->get_str();
        case Tag::Function:
            return f_->to_string();
    }
    return "?";
}

// ---------------------------------------------------------------- RatFun

RatFun::RatFun(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw ArithmeticError("rational function with zero denominator");
    if (num.is_zero()) {
        den = Poly::constant(den.field(), den.field().one());
        return;
    }
    Poly g = gcd(num, den);
    if (!g.is_one()) {
        num = num / g;
        den = den / g;
    }
    Scalar l = den.lead();
    if (!l.is_one()) {
        Scalar li = l.inverse();
        num = num * li;
        den = den * li;
    }
}

Scalar RatFun::eval(const Scalar& at) const {
    Scalar d = den.eval(at);
    if (d.is_zero()) throw ArithmeticError("pole of " + to_string() + " at " + at.to_string());
    return num.eval(at) / d;
}

std::string RatFun::to_string() const {
    if (den.is_one()) return num.to_string();
    std::string n = num.to_string();
    if (num.degree() > 0 && n.find_first_of("+-", 1) != std::string::npos) n = "(" + n + ")";
    std::string d = den.to_string();
    if (d.find_first_of("+-*", 1) != std::string::npos) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace ditalg
