#include "doctest.h"
#include "ditalg/fixtures.hpp"
#include "ditalg/reduce.hpp"
#include "support.hpp"

using namespace ditalg;
using namespace ditalg::testing;

namespace {

using DitPtr = std::shared_ptr<const Dit>;

DitPtr share(Dit d) { return std::make_shared<const Dit>(std::move(d)); }

TensorElement arr(const Dit& d, const char* n) { return TensorElement::arrow(d.layer, d.arrow(n)); }

// F is full, faithful and functorial on random target modules.
void check_functor(const Reduction& r, std::mt19937_64& rng, int trials, std::size_t max_total) {
    const Dit& src = r.source();
    const Dit& tgt = r.target();
    for (int t = 0; t < trials; ++t) {
        Rep n = rand_rep(tgt, rng, rand_dims(rng, tgt.npoints(), max_total));
        Rep n2 = rand_rep(tgt, rng, rand_dims(rng, tgt.npoints(), max_total));
        Rep m = r.apply(n), m2 = r.apply(n2);
        REQUIRE(is_valid_rep(src, m));
        CHECK(m.total_dim() <= r.dim_factor() * n.total_dim());
        CHECK(hom_dim(tgt, n, n2) == hom_dim(src, m, m2));
        CHECK(r.apply(n, n, identity_morphism(tgt, n)) == identity_morphism(src, m));
        Morphism f = rand_combo(tgt, n, n2, rng);
        Morphism g = rand_combo(tgt, n2, n, rng);
        Morphism Ff = r.apply(n, n2, f);
        CHECK(is_morphism(src, m, m2, Ff));
        CHECK(r.apply(n, n, compose(tgt, n, n2, n, g, f)) == compose(src, m, m2, m, r.apply(n2, n, g), Ff));
    }
}

Rep rename(const Dit& from, const Dit& to, const Rep& m) {
    Rep r = from_named(to, to_named(from, m));
    r.field = m.field;
    return r;
}

// A^{z⊖} = A^{⊖z} and Res F^z = F^{⊖z} Res.
void check_detachment(DitPtr d, const std::string& e0, const std::vector<Step>& steps, std::mt19937_64& rng) {
    ReductionPtr z = replay(d, steps);
    DitPtr detached = detach(*d, e0);
    ReductionPtr zd = replay(detached, steps);
    DitPtr after = detach(z->target(), e0);
    INFO(canonical_form(*after));
    INFO(canonical_form(zd->target()));
    REQUIRE(structurally_equal(*after, zd->target()));
    for (int t = 0; t < 20; ++t) {
        Rep n = rand_rep(z->target(), rng, rand_dims(rng, z->target().npoints(), 3));
        Rep lhs = restrict_detached(*d, *detached, e0, z->apply(n));
        Rep n_res = rename(*after, zd->target(), restrict_detached(z->target(), *after, e0, n));
        CHECK(lhs == zd->apply(n_res));
    }
}

}  // namespace

TEST_CASE("deletion is full and characterizes its image") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(1);
    DitPtr d = share(fixture_exi(F));
    ReductionPtr r = delete_points(d, {"3"});
    CHECK(r->target().npoints() == 2);
    CHECK(r->target().narrows() == 1);
    CHECK(r->target().ideal.empty());
    check_functor(*r, rng, 20, 3);
    const auto& q = dynamic_cast<const QuotientReduction&>(*r);
    for (int t = 0; t < 20; ++t) {
        Rep n = rand_rep(r->target(), rng, rand_dims(rng, 2, 3));
        auto back = q.preimage(r->apply(n));
        REQUIRE(back);
        CHECK(*back == n);
        Rep m = rand_rep(*d, rng, rand_dims(rng, 3, 3));
        auto pre = q.preimage(m);
        CHECK(pre.has_value() == (m.dims[2] == 0));
        if (pre) CHECK(r->apply(*pre) == m);
    }
}

TEST_CASE("regularization on EX2") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(2);
    DitPtr d = share(fixture_ex2(F));
    ReductionPtr r = regularize(d, "a", "v");
    CHECK(r->target().narrows() == 0);
    check_functor(*r, rng, 10, 3);
    CHECK_THROWS_AS(regularize(share(fixture_exk(F)), "a", "b"), ReductionError);
}

TEST_CASE("factor out an arrow lying in the ideal") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(3);
    Bigraph g;
    for (const char* p : {"1", "2", "3"}) g.add_point(p);
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("b", "2", "3", false);
    Dit d{Layer(F, g)};
    d.ideal = {arr(d, "b")};
    DitPtr dp = share(d);
    ReductionPtr r = factor_out(dp, {"b"});
    CHECK(r->target().narrows() == 1);
    CHECK(r->target().ideal.empty());
    check_functor(*r, rng, 15, 3);
    CHECK_THROWS_AS(factor_out(dp, {"a"}), ReductionError);
}

TEST_CASE("absorbing a loop gives a rational point") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(4);
    Bigraph g;
    g.add_point("0");
    g.add_point("1");
    g.add_arrow("c", "0", "1", false);
    g.add_arrow("l", "1", "1", false);
    DitPtr d = share(Dit(Layer(F, g)));
    ReductionPtr r = absorb(d, "l");
    CHECK(r->target().layer.rational(1));
    check_functor(*r, rng, 15, 3);
}

TEST_CASE("basechange of parallel arrows") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(5);
    DitPtr d = share(fixture_exk(F));
    Matrix m = Matrix::identity(F, 2);
    m(0, 1) = F(3);
    ReductionPtr r = basechange(d, {"a", "b"}, {"a'", "b'"}, m);
    check_functor(*r, rng, 15, 3);
}

TEST_CASE("edge reduction of EX1 and EXK") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(6);
    DitPtr ex1 = share(fixture_ex1(F));
    ReductionPtr r1 = reduce_admissible(ex1, edge_spec(*ex1, "a"));
    CHECK(r1->target().npoints() == 3);
    CHECK(r1->target().narrows() == 2);
    CHECK(r1->target().graph().solid().empty());
    CHECK(r1->dim_factor() == 2);
    check_functor(*r1, rng, 10, 3);

    DitPtr exk = share(fixture_exk(F));
    ReductionPtr rk = reduce_admissible(exk, edge_spec(*exk, "a"));
    const auto& adm = dynamic_cast<const AdmissibleReduction&>(*rk);
    CHECK(adm.data().P.size() == 2);
    CHECK(adm.data().coassociative());
    CHECK(adm.data().dual_bases_ok());
    CHECK(rk->target().narrows() == 6);
    CHECK(certify(rk->target()).roiter());
    check_functor(*rk, rng, 20, 3);
}

TEST_CASE("admissible reduction identities on EXL") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(7);
    DitPtr d = share(fixture_exl(F));
    ReductionPtr r = reduce_admissible(d, edge_spec(*d, "a"));
    const auto& adm = dynamic_cast<const AdmissibleReduction&>(*r);
    const AdmissibleData& D = adm.data();
    const Dit& t = r->target();
    CHECK(D.coassociative());
    CHECK(D.dual_bases_ok());
    validate(t);
    for (int k = 0; k < d->narrows(); ++k) {
        TensorElement a = TensorElement::arrow(d->layer, k);
        TensorElement dd = extend_differential(d->layer, d->delta, extend_differential(d->layer, d->delta, a));
        const Arrow& ar = d->layer.arrow(k);
        for (int x : D.basis_at[static_cast<std::size_t>(ar.s)])
            for (int nu : D.basis_at[static_cast<std::size_t>(ar.t)]) {
                TensorElement sx = adm.sigma(a, nu, x);
                TensorElement lhs = extend_differential(t.layer, t.delta, extend_differential(t.layer, t.delta, sx));
                CHECK(lhs == adm.sigma(dd, nu, x));
            }
    }
    check_functor(*r, rng, 20, 3);
}

TEST_CASE("composites apply in reverse order") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(8);
    DitPtr d = share(fixture_exk(F));
    ReductionPtr e = reduce_admissible(d, edge_spec(*d, "a"));
    ReductionPtr del = delete_points(e->target_ptr(), {"1"});
    ReductionPtr c = compose_reductions(d, {e, del});
    CHECK(c->dim_factor() == 2);
    Rep n = rand_rep(c->target(), rng, {1, 1});
    CHECK(c->apply(n) == e->apply(del->apply(n)));
    check_functor(*c, rng, 10, 3);
    ReductionPtr again = replay(d, {e->step(), del->step()});
    CHECK(structurally_equal(again->target(), c->target()));
}

TEST_CASE("detachment commutes with each reduction kind") {
    Field F = Field::prime(101);
    std::mt19937_64 rng(9);
    DitPtr exi = share(fixture_exi(F));
    check_detachment(exi, "1", {Step{StepKind::deletion, {"3"}, {}, {}, std::nullopt, std::nullopt}}, rng);
    check_detachment(exi, "1", {Step{StepKind::admissible, {}, {}, {}, std::nullopt, edge_spec(*exi, "b")}}, rng);

    Bigraph g;
    for (const char* p : {"0", "1", "2"}) g.add_point(p);
    g.add_arrow("c", "0", "1", false);
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("v", "1", "2", true);
    g.add_arrow("l", "2", "2", false);
    Dit r{Layer(F, g)};
    r.delta[static_cast<std::size_t>(r.arrow("a"))] = arr(r, "v");
    DitPtr rp = share(r);
    check_detachment(rp, "0", {Step{StepKind::regularization, {}, {"a", "v"}, {}, std::nullopt, std::nullopt}}, rng);
    check_detachment(rp, "0", {Step{StepKind::absorption, {}, {"l"}, {}, std::nullopt, std::nullopt}}, rng);

    Bigraph h;
    for (const char* p : {"1", "2", "3"}) h.add_point(p);
    h.add_arrow("a", "1", "2", false);
    h.add_arrow("b", "2", "3", false);
    Dit q{Layer(F, h)};
    q.ideal = {arr(q, "b")};
    check_detachment(share(q), "1", {Step{StepKind::factor_out, {}, {"b"}, {}, std::nullopt, std::nullopt}}, rng);
}

TEST_CASE("generic module through the Kronecker reduction") {
    Field F = Field::prime(3);
    DitPtr d = share(fixture_exk(F));
    Dit loop_dit = [&] {
        Bigraph g;
        g.add_point("p", Factor::polynomial_ring());
        return Dit(Layer(F, g));
    }();
    Rep z = generic_module(loop_dit, "p");
    CHECK(z.total_dim() == 1);
    CHECK(z.field.is_function());
}
