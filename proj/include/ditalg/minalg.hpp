// Minimal algebras: products of trivial factors k and localized k[x]_h.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ditalg/matrix.hpp"
#include "ditalg/scalar.hpp"

namespace ditalg {

struct Factor {
    bool rational = false;
    std::vector<Poly> inverted;  // monic, each of positive degree

    static Factor trivial() { return {}; }
    static Factor polynomial_ring() { return {true, {}}; }
    static Factor localized(std::vector<Poly> inv);
    // Product of the inverted polynomials (1 when none).
    Poly h(const Field& f) const;
    bool operator==(const Factor& o) const;
    std::string to_string() const;
};

// k-basis element of a factor ring: x^r for n = 0, x^r / h^n with r < deg h
// for n >= 1. Trivial factors only have {0,0}.
struct Deco {
    int r = 0;
    int n = 0;
    bool operator<(const Deco& o) const { return n != o.n ? n < o.n : r < o.r; }
    bool operator==(const Deco& o) const { return r == o.r && n == o.n; }
    bool operator!=(const Deco& o) const { return !(*this == o); }
    bool is_unit_deco() const { return r == 0 && n == 0; }
};

using DecoSum = std::vector<std::pair<Deco, Scalar>>;

// Element num / h^n of k[x]_h.
struct LocalElem {
    Poly num;
    int n = 0;
};

class FactorRing {
public:
    FactorRing(Field f, Factor fac);

    const Factor& factor() const { return fac_; }
    bool rational() const { return fac_.rational; }
    const Poly& h() const { return h_; }

    LocalElem value(const Deco& d) const;
    DecoSum expand(const LocalElem& e) const;
    // num/den with den dividing a power of h.
    LocalElem from_fraction(const Poly& num, const Poly& den) const;
    LocalElem parse(const std::string& text) const;
    LocalElem combine(const DecoSum& s) const;
    DecoSum mul(const Deco& a, const Deco& b) const;
    // Matrix of the basis element acting through X (dims from X).
    Matrix act(const Deco& d, const Matrix& x) const;
    Matrix act(const LocalElem& e, const Matrix& x) const;
    // Whether every inverted polynomial is invertible at X.
    bool admissible_operator(const Matrix& x) const;
    std::string deco_string(const Deco& d) const;
    std::string elem_string(const LocalElem& e) const;

private:
    Field F_;
    Factor fac_;
    Poly h_;
    mutable std::map<std::pair<Deco, Deco>, DecoSum> cache_;
};

}  // namespace ditalg
