#include "doctest.h"
#include "ditalg/fixtures.hpp"
#include "ditalg/tensor.hpp"

using namespace ditalg;

TEST_CASE("words compose right to left") {
    Field F = Field::prime(101);
    Dit d = fixture_exi(F);
    const Layer& L = d.layer;
    TensorElement a = TensorElement::arrow(L, d.arrow("a")), b = TensorElement::arrow(L, d.arrow("b"));
    TensorElement ba = multiply(L, b, a);
    CHECK_FALSE(ba.is_zero());
    CHECK(multiply(L, a, b).is_zero());
    CHECK(ba.degree(L) == 0);
    CHECK(ba.between(L, 0, 2) == ba);
    CHECK(ba.between(L, 0, 1).is_zero());
    CHECK(multiply(L, TensorElement::idempotent(L, 1), a) == a);
}

TEST_CASE("Leibniz extension and squares") {
    Field F = Field::prime(101);
    Dit d = fixture_exl(F);
    const Layer& L = d.layer;
    auto g = [&](const char* n) { return TensorElement::arrow(L, d.arrow(n)); };
    TensorElement s = g("s");
    TensorElement dd = extend_differential(L, d.delta, d.delta[static_cast<std::size_t>(d.arrow("s"))]);
    CHECK(dd == -multiply(L, {g("y"), g("b"), g("a"), g("x")}));
    // δ(uv) = δ(u) v + (-1)^{deg u} u δ(v)
    TensorElement yb = multiply(L, g("y"), g("b"));
    TensorElement t = g("t");
    CHECK(extend_differential(L, d.delta, multiply(L, yb, t)) ==
          multiply(L, extend_differential(L, d.delta, yb), t) -
              multiply(L, yb, extend_differential(L, d.delta, t)));
    CHECK(extend_differential(L, d.delta, s).degree(L) == 1);
}

TEST_CASE("graded pieces of a directed bigraph") {
    Field F = Field::prime(101);
    Dit d = fixture_exl(F);
    const Layer& L = d.layer;
    CHECK(graded_component_basis(L, 0, 4, 1, 6).size() == 1);
    CHECK(graded_component_basis(L, 0, 4, 0, 6).size() == 1);
    CHECK(graded_component_basis(L, 0, 4, 2, 6).size() == 1);
    CHECK(graded_component_basis(L, 4, 0, 0, 6).empty());
}

TEST_CASE("decorations at a localized point") {
    Field F = Field::rationals();
    Bigraph g;
    g.add_point("p", Factor::localized({parse_poly(F, "x+1")}));
    Layer L(F, g);
    auto ds = decorations(L, 0, 2);
    CHECK(ds.size() == 5);  // 1, x, x^2, 1/(x+1), 1/(x+1)^2
    Bigraph h;
    h.add_point("q");
    CHECK(decorations(Layer(F, h), 0, 2).size() == 1);
}
