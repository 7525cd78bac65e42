#include <random>

#include "doctest.h"
#include "ditalg/matrix.hpp"
#include "ditalg/minalg.hpp"
#include "ditalg/polymat.hpp"

using namespace ditalg;

namespace {

Poly random_poly(const Field& F, std::mt19937_64& rng, int maxdeg) {
    std::uniform_int_distribution<int> deg(-1, maxdeg);
    std::uniform_int_distribution<std::int64_t> c(0, 100);
    int d = deg(rng);
    std::vector<Scalar> v;
    for (int i = 0; i <= d; ++i) v.push_back(F(c(rng)));
    return Poly(F, v);
}

Matrix random_matrix(const Field& F, std::mt19937_64& rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<std::int64_t> d(0, F.characteristic() - 1);
    Matrix m(F, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = F(d(rng));
    return m;
}

}  // namespace

TEST_CASE("prime field rejects composite moduli and zero division") {
    CHECK_THROWS_AS(Field::prime(100), ArithmeticError);
    Field F = Field::prime(7);
    CHECK_THROWS_AS(F.zero().inverse(), ArithmeticError);
    CHECK((F(3) * F(5)) == F(1));
    CHECK(F(3).inverse() == F(5));
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(11);
    for (Field F : {Field::prime(101), Field::rationals()}) {
        for (int t = 0; t < 200; ++t) {
            std::uniform_int_distribution<std::int64_t> d(-50, 50);
            Scalar a = F.fraction(d(rng), 1 + (t % 5)), b = F(d(rng)), c = F.fraction(d(rng), 3);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a - a == F.zero());
            if (!a.is_zero()) CHECK(a * a.inverse() == F.one());
        }
    }
}

TEST_CASE("function field arithmetic and specialization") {
    Field F = Field::prime(5);
    Field K = Field::function_field(F);
    Scalar x = K.variable();
    Scalar f = (x * x + K(1)) / (x + K(2));
    CHECK(f.ratfun().eval(F(1)) == F(2) / F(3));
    CHECK(K.parse("(x^2+1)/(x+2)") == f);
    CHECK(K.name() == "F5(x)");
}

TEST_CASE("polynomial division, gcd and factorization") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        Poly a = random_poly(F, rng, 6), b = random_poly(F, rng, 4);
        if (b.is_zero()) continue;
        auto [q, r] = a.divmod(b);
        CHECK(q * b + r == a);
        CHECK(r.degree() < b.degree());
        auto g = xgcd(a, b);
        CHECK(g.s * a + g.t * b == g.g);
    }
    Field F2 = Field::prime(2);
    Poly p = parse_poly(F2, "x^4+x+1");
    CHECK(is_irreducible(p));
    auto fac = factor(parse_poly(F2, "x^5+x^4+x^3+x"));  // x (x+1)^2 (x^2+x+1)
    Poly prod = Poly::constant(F2, F2.one());
    for (auto& [q, m] : fac) prod *= q.pow(m);
    CHECK(prod == parse_poly(F2, "x^5+x^4+x^3+x"));
    CHECK(fac.size() == 3);
    CHECK(monic_irreducibles(F2, 2).size() == 1);
    CHECK(monic_irreducibles(Field::prime(3), 2).size() == 3);
}

TEST_CASE("rational factorization finds rational roots") {
    Field Q = Field::rationals();
    auto fac = factor(parse_poly(Q, "2*x^3-3*x^2+x"));
    CHECK(fac.size() == 3);
    CHECK(roots_in_field(parse_poly(Q, "x^2-2")).empty());
}

TEST_CASE("row reduction: rank plus nullity") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Matrix m = random_matrix(F, rng, 5, 7);
        Matrix k = m.kernel();
        CHECK(m.rank() + k.cols() == 7);
        CHECK((m * k).is_zero());
    }
    Matrix I = Matrix::identity(F, 3);
    auto s = solve_linear(I, Matrix(F, 3, 1));
    CHECK(s.consistent);
    CHECK(s.particular->is_zero());
    CHECK(s.kernel.cols() == 0);
    CHECK(Matrix(F, 1, 2).kernel().cols() == 2);
}

TEST_CASE("inverse, determinant and minimal polynomial") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        Matrix m = random_matrix(F, rng, 4, 4);
        auto inv = m.inverse();
        CHECK(inv.has_value() == !m.det().is_zero());
        if (inv) CHECK((m * *inv).is_identity());
        CHECK(eval_poly(min_poly(m), m).is_zero());
    }
}

TEST_CASE("span coordinates") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(9);
    Matrix B = random_matrix(F, rng, 6, 3);
    Matrix c = random_matrix(F, rng, 3, 1);
    SpanCoordinates sc(B);
    auto got = sc.coords(B * c);
    REQUIRE(got.has_value());
    CHECK(B * *got == B * c);
    Matrix e = random_matrix(F, rng, 6, 1);
    if (B.hstack(e).rank() == 4) CHECK(!sc.contains(e));
}

TEST_CASE("Smith normal form on random polynomial matrices") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 4;
        PolyMatrix m(F, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = random_poly(F, rng, 3);
        SmithForm s = smith_normal_form(m);
        CHECK(s.P * m * s.Q == s.D);
        CHECK(s.D.is_diagonal());
        CHECK(s.P.det().degree() == 0);
        CHECK(s.Q.det().degree() == 0);
        CHECK(s.P * s.P_inv == PolyMatrix::identity(F, r));
        CHECK(s.Q * s.Q_inv == PolyMatrix::identity(F, c));
        auto inv = s.invariant_factors();
        for (std::size_t i = 1; i < inv.size(); ++i) CHECK(inv[i - 1].divides(inv[i]));
    }
}

TEST_CASE("factor rings expand and multiply decorations") {
    Field F = Field::prime(7);
    FactorRing R(F, Factor::localized({parse_poly(F, "x+1")}));
    LocalElem e = R.from_fraction(parse_poly(F, "x^2"), parse_poly(F, "(x+1)^2"));
    LocalElem back = R.combine(R.expand(e));
    CHECK(back.num * R.h().pow(e.n) == e.num * R.h().pow(back.n));
    Matrix X = Matrix::from_rows(F, {{F(2)}});
    CHECK(R.act(e, X)(0, 0) == F(4) / F(9));
    CHECK(!R.admissible_operator(Matrix::from_rows(F, {{F(6)}})));
    CHECK_THROWS_AS(R.from_fraction(Poly::constant(F, F.one()), parse_poly(F, "x")), ArithmeticError);
}
