#include <doctest.h>

#include "canproj/polynomial.hpp"

using namespace canproj;

namespace {
RingPtr ring4() {
    static RingPtr r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::rationals());
    return r;
}
} // namespace

TEST_CASE("parser handles the documented inputs") {
    auto r = ring4();
    auto q = parse_poly<QQ>(r, "y0^2+y2^2-4*y1*y3");
    CHECK(q.term_count() == 3);
    CHECK(q.is_homogeneous());
    CHECK(q.degree() == 2);
    CHECK(parse_poly<QQ>(r, "0").is_zero());
    CHECK(parse_poly<QQ>(r, "y0*y1 - y1*y0").is_zero());
    CHECK(parse_poly<QQ>(r, "(y0+y1)^2 - y0^2 - 2*y0*y1 - y1^2").is_zero());
    CHECK(parse_poly<QQ>(r, "1/2 + 1/3").constant_value() == QQ(5, 6));
    CHECK(parse_poly<QQ>(r, "-y0 + 2").term_count() == 2);
}

TEST_CASE("parser reports position and unknown variables") {
    auto r = ring4();
    CHECK_THROWS_AS(parse_poly<QQ>(r, "y0 + zz"), ParseError);
    CHECK_THROWS_AS(parse_poly<QQ>(r, "y0 + + y1"), ParseError);
    CHECK_THROWS_AS(parse_poly<QQ>(r, "(y0"), ParseError);
    CHECK_THROWS_AS(parse_poly<QQ>(r, "1/0"), ParseError);
    try {
        parse_poly<QQ>(r, "y0 + qq3");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("printing round-trips through the parser") {
    auto r = ring4();
    Rng rng(3);
    for (int it = 0; it < 40; ++it) {
        Poly<QQ> p = random_homogeneous<QQ>(r, static_cast<long>(1 + rng.below(4)), rng, false);
        Poly<QQ> q = p + Poly<QQ>::from_int(r, rng.range(-3, 3));
        CHECK(parse_poly<QQ>(r, q.to_string()) == q);
    }
    auto fr = RingSpec::make({"a", "b"}, FieldSpec::prime(10007));
    Rng rng2(4);
    for (int it = 0; it < 20; ++it) {
        Poly<Fp> p = random_homogeneous<Fp>(fr, static_cast<long>(1 + rng2.below(5)), rng2, false);
        CHECK(parse_poly<Fp>(fr, p.to_string()) == p);
    }
}

TEST_CASE("arithmetic identities") {
    auto r = ring4();
    auto x = Poly<QQ>::var(r, 0), y = Poly<QQ>::var(r, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK((x + y).pow(3) == x.pow(3) + QQ(3) * (x * x * y + x * y * y) + y.pow(3));
    CHECK((x * y).pow(0) == Poly<QQ>::from_int(r, 1));
    CHECK((-x) + x == Poly<QQ>::zero(r));
    CHECK(x.times_scalar(QQ(0)).is_zero());
}

TEST_CASE("homogeneity and graded degree") {
    auto r = ring4();
    auto p = parse_poly<QQ>(r, "y0^2*y1 + y3^3");
    CHECK(p.is_homogeneous());
    CHECK(p.graded_degree()[0] == 3);
    auto q = parse_poly<QQ>(r, "y0^2 + y1");
    CHECK(!q.is_homogeneous());
    auto comps = q.homogeneous_components();
    CHECK(comps.size() == 2);
    CHECK(comps.at({1, 0}) == Poly<QQ>::var(r, 1));
}

TEST_CASE("exact division and divisibility") {
    auto r = ring4();
    auto f = parse_poly<QQ>(r, "y0^3 - y1^3");
    auto d = parse_poly<QQ>(r, "y0 - y1");
    CHECK(f.divide_exact(d) == parse_poly<QQ>(r, "y0^2 + y0*y1 + y1^2"));
    CHECK(d.divides(f));
    CHECK(!parse_poly<QQ>(r, "y0 + y2").divides(f));
    CHECK_THROWS_AS(d.divide_exact(Poly<QQ>::zero(r)), StructureError);
    auto g = d * d * parse_poly<QQ>(r, "y2 + y3");
    CHECK(g.max_power_dividing(d) == 2);
}

TEST_CASE("substitution implements a ring map") {
    auto r = ring4();
    auto target = RingSpec::make({"t"}, FieldSpec::rationals());
    auto t = Poly<QQ>::var(target, 0);
    // parametrize the twisted-cubic style curve
    std::vector<Poly<QQ>> images = {t, t * t, t * t * t, Poly<QQ>::from_int(target, 1)};
    auto rel = parse_poly<QQ>(r, "y0*y2 - y1^2");
    CHECK(rel.substitute(images).is_zero());
    auto f = parse_poly<QQ>(r, "y0^2 + y3");
    CHECK(f.substitute(images) == t * t + Poly<QQ>::from_int(target, 1));
}

TEST_CASE("evaluation and derivative") {
    auto r = ring4();
    auto f = parse_poly<QQ>(r, "y0^2*y1 - 3*y3");
    std::vector<QQ> pt = {QQ(2), QQ(5), QQ(0), QQ(7)};
    CHECK(f.eval(pt) == QQ(20 - 21));
    CHECK(f.derivative(0) == parse_poly<QQ>(r, "2*y0*y1"));
    CHECK(f.derivative(3) == parse_poly<QQ>(r, "-3"));
    CHECK(f.derivative(2).is_zero());
}

TEST_CASE("map_variables transports polynomials between rings") {
    auto r = ring4();
    auto small = RingSpec::make({"y1", "y3"}, FieldSpec::rationals());
    auto f = parse_poly<QQ>(r, "y1^2 - 2*y3");
    auto g = f.map_variables(small, {-1, 0, -1, 1});
    CHECK(g == parse_poly<QQ>(small, "y1^2 - 2*y3"));
    // a polynomial touching an unmapped variable must be rejected
    CHECK_THROWS_AS(parse_poly<QQ>(r, "y0").map_variables(small, {-1, 0, -1, 1}), StructureError);
}

TEST_CASE("monomial bases by degree") {
    CHECK(monomials_of_total_degree(4, 0).size() == 1);
    CHECK(monomials_of_total_degree(4, 1).size() == 4);
    CHECK(monomials_of_total_degree(4, 2).size() == 10);
    CHECK(monomials_of_total_degree(4, 3).size() == 20);
    // grevlex-descending output
    auto ms = monomials_of_total_degree(3, 2);
    auto ord = MonomialOrder::grevlex();
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) CHECK(ord.greater(ms[i], ms[i + 1]));
    // bigraded slice: forms of bidegree (3,4) on 4+4 variables
    auto b = RingSpec::make({"x0", "x1", "x2", "x3", "h0", "h1", "h2", "h3"},
                            FieldSpec::rationals(), Grading::bidegree(8, 4));
    CHECK(monomials_of_degree(*b, {3, 4}).size() == 20 * 35);
}
