#include "doctest.h"
#include "ditalg/fixtures.hpp"
#include "ditalg/interlace.hpp"

using namespace ditalg;

TEST_CASE("fixtures carry the triangularity certificates") {
    Field F = Field::prime(101);
    for (const Dit& d : {fixture_ex1(F), fixture_ex2(F), fixture_exi(F), fixture_exk(F), fixture_exl(F)}) {
        Certificates c = certify(d);
        CHECK_MESSAGE(c.roiter(), canonical_form(d));
        CHECK(c.directed.ok);
        CHECK(c.balanced.ok);
    }
}

TEST_CASE("the square of the differential lands in the generated ideal") {
    Field F = Field::prime(101);
    Dit d = fixture_exl(F);
    Certificate c = check_interlaced(d);
    CHECK(c.ok);
    CHECK(c.detail != "delta^2 = 0");
    Dit bad = d;
    bad.ideal.clear();
    CHECK_FALSE(check_interlaced(bad).ok);
}

TEST_CASE("ideal pieces and membership") {
    Field F = Field::prime(101);
    Dit d = fixture_exi(F);
    const Layer& L = d.layer;
    GeneratedIdeal gi = generated_ideal(d, 0, 2, Caps{});
    ElementSpan I(F, gi.I);
    CHECK(I.dim() == 1);
    CHECK(I.contains(multiply(L, TensorElement::arrow(L, d.arrow("b")), TensorElement::arrow(L, d.arrow("a")))));
    CHECK_FALSE(I.contains(TensorElement::arrow(L, d.arrow("u"))));
}

TEST_CASE("quotient pieces and lifting") {
    Field F = Field::prime(101);
    Dit d = fixture_exl(F);
    QuotientPresentation q(d, Caps{});
    CHECK(q.piece(0, 4, 1).projection.rows() == 1);
    // y b a x lies in VIV, so the degree-2 piece collapses.
    CHECK(q.piece(0, 4, 2).words.size() == 1);
    CHECK(q.piece(0, 4, 2).projection.rows() == 0);

    Bigraph g;
    for (const char* n : {"1", "2", "3", "4"}) g.add_point(n);
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("b", "2", "3", false);
    g.add_arrow("c", "1", "4", false);
    g.add_arrow("z", "3", "4", true);
    Layer L(F, g);
    auto e = [&](const char* n) { return TensorElement::arrow(L, g.arrow_index(n)); };
    std::vector<TensorElement> dot(4);
    dot[static_cast<std::size_t>(g.arrow_index("c"))] = multiply(L, {e("z"), e("b"), e("a")});
    Dit lifted = lift_differential(L, {multiply(L, e("b"), e("a"))}, dot);
    CHECK(lifted.delta[static_cast<std::size_t>(g.arrow_index("c"))].is_zero());
    CHECK(certify(lifted).roiter());
}

TEST_CASE("generator levels follow the differential") {
    Field F = Field::prime(101);
    Dit d = fixture_exl(F);
    auto lv = generator_levels(d);
    REQUIRE(lv);
    CHECK((*lv)[static_cast<std::size_t>(d.arrow("s"))] > (*lv)[static_cast<std::size_t>(d.arrow("b"))]);
}
