#include <random>

#include "doctest.h"
#include "ditalg/fixtures.hpp"
#include "ditalg/io.hpp"
#include "support.hpp"

using namespace ditalg;

#ifndef DITALG_DATA
#define DITALG_DATA "data"
#endif

namespace {

std::string data(const std::string& f) { return std::string(DITALG_DATA) + "/" + f; }

bool same_dit(const Dit& a, const Dit& b) { return emit_dit(a) == emit_dit(b); }

}  // namespace

TEST_CASE("fixture files parse to the built-in fixtures") {
    CHECK(same_dit(*load_presentation(data("ex1.json")).dit, fixture_ex1(Field::prime(2))));
    CHECK(same_dit(*load_presentation(data("ex2.json")).dit, fixture_ex2(Field::prime(101))));
    CHECK(same_dit(*load_presentation(data("exi.json")).dit, fixture_exi(Field::prime(101))));
    CHECK(same_dit(*load_presentation(data("exk.json")).dit, fixture_exk(Field::prime(3))));
    auto exl = load_presentation(data("exl.json"));
    CHECK(same_dit(*exl.dit, fixture_exl(Field::prime(101))));
    REQUIRE(exl.layer_filtration);
    CHECK(check_layer_filtration(*exl.dit, *exl.layer_filtration).ok);
}

TEST_CASE("emit then parse is the identity") {
    for (const char* f : {"ex1.json", "ex2.json", "exi.json", "exk.json", "exl.json", "cycle.json", "rational.json"}) {
        CAPTURE(f);
        auto p = load_presentation(data(f));
        std::string once = emit_presentation(p);
        std::string twice = emit_presentation(parse_presentation(once));
        CHECK(once == twice);
    }
}

TEST_CASE("terms with polynomial coefficients") {
    std::string text = R"J({
      "field": "F7",
      "points": [{"name": "p", "factor": "rational", "inverted": ["x-1"]}, {"name": "q"}],
      "arrows": [{"name": "a", "from": "p", "to": "q"}, {"name": "v", "from": "p", "to": "q", "kind": "dashed"}],
      "differential": {"a": [["2", "v", "x^2+3"], ["1", "v", "1/(x-1)"]]},
      "ideal": [[{"at": "p", "coef": "x^2-x"}]]
    })J";
    auto p = parse_presentation(text);
    const Dit& d = *p.dit;
    CHECK_FALSE(d.delta[0].is_zero());
    auto again = parse_presentation(emit_presentation(p));
    CHECK(same_dit(d, *again.dit));
}

TEST_CASE("syntax errors carry line and column") {
    try {
        load_presentation(data("bad_syntax.json"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
        CHECK(e.column > 0);
    }
}

TEST_CASE("semantic errors name the offending path") {
    auto msg = [](const std::string& text) {
        try {
            parse_presentation(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(msg(R"J({"field": "F6", "points": []})J").find("field") != std::string::npos);
    CHECK(msg(R"J({"field": "F5", "points": [{"name": "1"}], "arrows": [{"name": "a", "from": "1", "to": "9"}]})J")
              .find("arrows[0]") != std::string::npos);
    CHECK(msg(R"J({"field": "F5", "points": [{"name": "1"}, {"name": "2"}],
                  "arrows": [{"name": "a", "from": "1", "to": "2"}],
                  "differential": {"a": [["1", "a", "1"]]}})J")
              .find("presentation") != std::string::npos);
    CHECK(msg(R"J({"field": "F5", "points": [{"name": "1"}], "arrows": [{"name": "a", "from": "1", "to": "1"}],
                  "layer_filtration": [[]]})J")
              .find("layer_filtration") != std::string::npos);
}

TEST_CASE("modules round-trip through JSON") {
    Dit d = fixture_exi(Field::prime(101));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        Rep m = testing::rand_rep(d, rng, testing::rand_dims(rng, 3, 4));
        Rep back = module_from_json(d, module_to_json(d, m));
        CHECK(back.dims == m.dims);
        CHECK(back.maps == m.maps);
    }
    Rep s = module_from_spec(d, "S:2");
    CHECK(s.dims == std::vector<std::size_t>{0, 1, 0});
    CHECK_THROWS_AS(module_from_spec(d, "S:9"), ParseError);
    CHECK_THROWS_AS(module_from_spec(d, "J:1@0^2"), ParseError);
}

TEST_CASE("reports round-trip") {
    auto d = std::make_shared<const Dit>(fixture_exk(Field::prime(3)));
    auto rep = classify(d, 2, 50);
    REQUIRE(rep.ok());
    ReportFile f = make_report_file(*d, rep);
    Json j = report_to_json(f);
    ReportFile g = report_from_json(j);
    CHECK(report_to_json(g).dump() == j.dump());
    CHECK(g.families.size() == 1);
    // The recorded plan replays on the source.
    auto replayed = replay(d, g.steps);
    CHECK(emit_dit(replayed->target()) == emit_dit(*rep.reduction.minimal));
}
