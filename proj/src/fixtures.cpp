#include "ditalg/fixtures.hpp"

namespace ditalg {

namespace {

Bigraph points(std::initializer_list<const char*> names) {
    Bigraph g;
    for (const char* n : names) g.add_point(n);
    return g;
}

TensorElement arr(const Layer& L, const Dit& d, const char* name) { return TensorElement::arrow(L, d.arrow(name)); }

}  // namespace

Dit fixture_ex1(const Field& f) {
    Bigraph g = points({"1", "2"});
    g.add_arrow("a", "1", "2", false);
    return Dit(Layer(f, g));
}

Dit fixture_ex2(const Field& f) {
    Bigraph g = points({"1", "2"});
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("v", "1", "2", true);
    Dit d{Layer(f, g)};
    d.delta[static_cast<std::size_t>(d.arrow("a"))] = arr(d.layer, d, "v");
    return d;
}

Dit fixture_exi(const Field& f) {
    Bigraph g = points({"1", "2", "3"});
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("b", "2", "3", false);
    g.add_arrow("u", "1", "3", true);
    Dit d{Layer(f, g)};
    d.ideal = {multiply(d.layer, arr(d.layer, d, "b"), arr(d.layer, d, "a"))};
    return d;
}

Dit fixture_exk(const Field& f) {
    Bigraph g = points({"1", "2"});
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("b", "1", "2", false);
    return Dit(Layer(f, g));
}

Dit fixture_exl(const Field& f) {
    Bigraph g = points({"0", "1", "2", "3", "4"});
    g.add_arrow("a", "1", "2", false);
    g.add_arrow("b", "2", "3", false);
    g.add_arrow("t", "0", "2", false);
    g.add_arrow("s", "0", "4", false);
    g.add_arrow("x", "0", "1", true);
    g.add_arrow("y", "3", "4", true);
    Dit d{Layer(f, g)};
    const Layer& L = d.layer;
    d.ideal = {multiply(L, arr(L, d, "b"), arr(L, d, "a"))};
    d.delta[static_cast<std::size_t>(d.arrow("s"))] =
        multiply(L, {arr(L, d, "y"), arr(L, d, "b"), arr(L, d, "t")});
    d.delta[static_cast<std::size_t>(d.arrow("t"))] = multiply(L, arr(L, d, "a"), arr(L, d, "x"));
    return d;
}

}  // namespace ditalg
