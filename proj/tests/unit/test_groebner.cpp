#include <doctest.h>

#include "canproj/groebner.hpp"

using namespace canproj;

namespace {

/// Buchberger certificate: every S-polynomial of the basis reduces to zero.
template <class K>
bool certificate(const RingPtr& ring, const GroebnerBasis<K>& gb) {
    const auto& e = gb.elements;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            auto li = e[i].leading_term(gb.order);
            auto lj = e[j].leading_term(gb.order);
            Monomial l = li.m.lcm(lj.m);
            auto s = e[i].times_term(li.c.inv(), l.div(li.m)) -
                     e[j].times_term(lj.c.inv(), l.div(lj.m));
            if (!normal_form(s, gb).is_zero()) return false;
        }
    (void)ring;
    return true;
}

} // namespace

TEST_CASE("single generator is its own basis") {
    auto r = RingSpec::make({"y0", "y1"}, FieldSpec::rationals());
    auto gb = buchberger<QQ>(r, {parse_poly<QQ>(r, "y0")}, MonomialOrder::grevlex());
    CHECK(gb.elements.size() == 1);
    CHECK(gb.elements[0] == parse_poly<QQ>(r, "y0"));
}

TEST_CASE("curve parametrization relations appear under elimination order") {
    auto r = RingSpec::make({"y1", "y0", "y3"}, FieldSpec::rationals());
    // y0 = y1^2, y3 = y1^3; eliminating y1 must reveal y3^2 - y0^3
    std::vector<Poly<QQ>> gens = {parse_poly<QQ>(r, "y0 - y1^2"), parse_poly<QQ>(r, "y3 - y1^3")};
    auto gb = buchberger(r, gens, MonomialOrder::block(1));
    bool found = false;
    for (const auto& e : gb.elements) {
        bool pure = true;
        for (const auto& t : e.terms())
            if (t.m.degree_in(0)) pure = false;
        if (!pure) continue;
        // substitution oracle: must vanish under the parametrization
        auto tring = RingSpec::make({"s"}, FieldSpec::rationals());
        auto s = Poly<QQ>::var(tring, 0);
        CHECK(e.substitute({s, s * s, s * s * s}).is_zero());
        found = true;
    }
    CHECK(found);
    CHECK(certificate(r, gb));
}

TEST_CASE("a regular sequence of quadrics is already a basis") {
    auto r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::rationals());
    std::vector<Poly<QQ>> gens = {parse_poly<QQ>(r, "y0^2+y2^2-4*y1*y3"),
                                  parse_poly<QQ>(r, "y1^2+y3^2-4*y0*y2")};
    auto gb = buchberger(r, gens, MonomialOrder::grevlex());
    CHECK(gb.elements.size() == 2);
    CHECK(certificate(r, gb));
    for (const auto& g : gens) CHECK(normal_form(g, gb).is_zero());
}

TEST_CASE("normal form is idempotent and linear over seeded samples") {
    auto r = RingSpec::make({"y0", "y1", "y2"}, FieldSpec::prime(31991));
    Rng rng(17);
    std::vector<Poly<Fp>> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_homogeneous<Fp>(r, 2, rng));
    auto gb = buchberger(r, gens, MonomialOrder::grevlex());
    CHECK(certificate(r, gb));
    for (int it = 0; it < 25; ++it) {
        auto f = random_homogeneous<Fp>(r, static_cast<long>(1 + rng.below(4)), rng, false);
        auto g = random_homogeneous<Fp>(r, static_cast<long>(1 + rng.below(4)), rng, false);
        auto nf = normal_form(f, gb);
        CHECK(normal_form(nf, gb) == nf);
        CHECK(normal_form(f + g, gb) == normal_form(normal_form(f, gb) + normal_form(g, gb), gb));
    }
}

TEST_CASE("reduced basis shape: monic leads, no term reducible by the others") {
    auto r = RingSpec::make({"y0", "y1", "y2"}, FieldSpec::rationals());
    std::vector<Poly<QQ>> gens = {parse_poly<QQ>(r, "y0^2 - y1*y2"), parse_poly<QQ>(r, "y0*y1 - y2^2"),
                                  parse_poly<QQ>(r, "3*y1^2*y2 - y0*y2^2")};
    auto ord = MonomialOrder::grevlex();
    auto gb = buchberger(r, gens, ord);
    for (std::size_t i = 0; i < gb.elements.size(); ++i) {
        CHECK(gb.elements[i].leading_term(ord).c.is_one());
        for (std::size_t j = 0; j < gb.elements.size(); ++j) {
            if (i == j) continue;
            const Monomial& lm = gb.elements[j].leading_term(ord).m;
            for (const auto& t : gb.elements[i].terms()) CHECK(!lm.divides(t.m));
        }
    }
    CHECK(certificate(r, gb));
}

TEST_CASE("bases agree between the cached orders on random input") {
    auto r = RingSpec::make({"y0", "y1", "y2"}, FieldSpec::prime(10007));
    Rng rng(23);
    for (int it = 0; it < 5; ++it) {
        std::vector<Poly<Fp>> gens;
        for (int i = 0; i < 2; ++i)
            gens.push_back(random_homogeneous<Fp>(r, static_cast<long>(2 + rng.below(2)), rng));
        for (const auto& ord : {MonomialOrder::grevlex(), MonomialOrder::lex(), MonomialOrder::block(1)}) {
            auto gb = buchberger(r, gens, ord);
            CHECK(certificate(r, gb));
            for (const auto& g : gens) CHECK(normal_form(g, gb, Budget::defaults()).is_zero());
        }
    }
}

TEST_CASE("budget guards raise a resource error, never a wrong answer") {
    auto r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::rationals());
    // leads y0*y1, y1*y2, y0^2 interact, so pairs survive the coprime filter
    std::vector<Poly<QQ>> gens = {parse_poly<QQ>(r, "y0*y1 - y2^2"), parse_poly<QQ>(r, "y1*y2 - y3^2"),
                                  parse_poly<QQ>(r, "y2*y3 - y0^2")};
    Budget tiny;
    tiny.max_pairs = 1;
    CHECK_THROWS_AS(buchberger(r, gens, MonomialOrder::grevlex(), tiny), ResourceError);
    Budget lowdeg;
    lowdeg.max_degree = 1;
    CHECK_THROWS_AS(buchberger(r, gens, MonomialOrder::grevlex(), lowdeg), ResourceError);

    // pairwise coprime leads never spend the pair budget at all
    std::vector<Poly<QQ>> coprime = {parse_poly<QQ>(r, "y0^2 - y1*y2"),
                                     parse_poly<QQ>(r, "y0*y3 - y1^2"),
                                     parse_poly<QQ>(r, "y1*y3 - y2^2")};
    auto gb = buchberger(r, coprime, MonomialOrder::grevlex(), tiny);
    CHECK(gb.elements.size() == 3);
}
