#include "doctest.h"
#include "ditalg/fixtures.hpp"
#include "ditalg/pipeline.hpp"

using namespace ditalg;

namespace {

std::shared_ptr<const Dit> share(Dit d) { return std::make_shared<const Dit>(std::move(d)); }

std::vector<std::vector<std::size_t>> dim_vectors(const ClassificationReport& r) {
    std::vector<std::vector<std::size_t>> v;
    for (const auto& m : r.indecomposables) v.push_back(m.module.dims);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("minimal input gives an empty plan") {
    Field F = Field::prime(5);
    Bigraph g;
    g.add_point("1");
    g.add_point("2");
    auto out = reduce_to_minimal(share(Dit(Layer(F, g))), 2, 10);
    CHECK_FALSE(out.obstruction);
    CHECK(out.plan.steps.empty());
    auto rep = classify(share(Dit(Layer(F, g))), 2, 10);
    CHECK(rep.indecomposables.size() == 2);
}

TEST_CASE("EX2 needs one regularization") {
    Field F = Field::prime(101);
    auto out = reduce_to_minimal(share(fixture_ex2(F)), 2, 10);
    REQUIRE_FALSE(out.obstruction);
    REQUIRE(out.plan.steps.size() == 1);
    CHECK(out.plan.steps[0].kind == StepKind::regularization);
    auto rep = classify(share(fixture_ex2(F)), 2, 10);
    CHECK(dim_vectors(rep) == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 0}});
}

TEST_CASE("EX1 classification") {
    Field F = Field::prime(2);
    auto rep = classify(share(fixture_ex1(F)), 3, 20);
    REQUIRE(rep.ok());
    CHECK(dim_vectors(rep) == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 0}, {1, 1}});
    CHECK(rep.families.empty());
}

TEST_CASE("EXK classification at d = 2") {
    Field F = Field::prime(3);
    auto rep = classify(share(fixture_exk(F)), 2, 50);
    INFO((rep.reduction.obstruction ? rep.reduction.obstruction->reason : std::string()));
    REQUIRE(rep.ok());
    REQUIRE(rep.families.size() == 1);
    const Family& fam = rep.families[0];
    CHECK(fam.specializations_ok);
    CHECK(fam.Z->dims == std::vector<std::size_t>{1, 1});
    CHECK(rep.indecomposables.size() == 6);
    for (std::size_t i = 0; i < rep.indecomposables.size(); ++i)
        CHECK(is_indecomposable(fixture_exk(F), rep.indecomposables[i].module));
}

TEST_CASE("EX-I goes through source recursion") {
    Field F = Field::prime(101);
    auto rep = classify(share(fixture_exi(F)), 3, 50);
    INFO((rep.reduction.obstruction ? rep.reduction.obstruction->reason : std::string()));
    REQUIRE(rep.ok());
    Dit d = fixture_exi(F);
    for (const auto& m : rep.indecomposables) {
        CHECK(is_valid_rep(d, m.module));
        CHECK(is_indecomposable(d, m.module));
    }
    // S1, S2, S3, the a-interval and the b-interval; ba = 0 rules out the long one.
    CHECK(rep.indecomposables.size() == 5);
}

TEST_CASE("budget exhaustion is an obstruction") {
    Field F = Field::prime(101);
    auto out = reduce_to_minimal(share(fixture_ex1(F)), 3, 0);
    REQUIRE(out.obstruction);
    CHECK(out.obstruction->reason.find("budget") != std::string::npos);
}

TEST_CASE("parametrization square for t <= 2") {
    Field F = Field::prime(5);
    auto rep = classify(share(fixture_exk(F)), 4, 200);
    REQUIRE(rep.ok());
    for (const auto& fam : rep.families) CHECK(fam.specializations_ok);
}

TEST_CASE("wild certificate checks") {
    Field F = Field::prime(3);
    Bigraph g;
    g.add_point("1");
    g.add_point("2");
    for (const char* a : {"a", "b", "c"}) g.add_arrow(a, "1", "2", false);
    Dit d{Layer(F, g)};
    Matrix one = Matrix::identity(F, 1);
    WildBimodule z{{1, 1}, {{{"", one}}, {{"x", one}}, {{"y", one}}}};
    std::vector<FreeModule> sample;
    for (std::int64_t u = 0; u < 3; ++u)
        for (std::int64_t v = 0; v < 3; ++v) {
            Matrix x(F, 1, 1), y(F, 1, 1);
            x(0, 0) = F(u);
            y(0, 0) = F(v);
            sample.push_back({x, y});
        }
    Matrix x2(F, 2, 2), y2(F, 2, 2);
    x2(0, 1) = F.one();
    y2(0, 0) = F.one();
    y2(1, 1) = F.one();
    sample.push_back({x2, y2});
    WildReport ok = verify_wild_certificate(d, z, sample);
    CHECK(ok.passed());
    CHECK(ok.pairs_checked == 45);

    WildBimodule zero{{0, 0}, {{}, {}, {}}};
    CHECK_FALSE(verify_wild_certificate(d, zero, sample).rank_ok);

    // Forgetting y identifies inputs that differ only in y.
    WildBimodule lossy{{1, 1}, {{{"", one}}, {{"x", one}}, {}}};
    CHECK_FALSE(verify_wild_certificate(d, lossy, sample).passed());
}
