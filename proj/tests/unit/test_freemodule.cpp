#include <doctest.h>

#include "canproj/freemodule.hpp"

using namespace canproj;

namespace {
RingPtr ring2() {
    static RingPtr r = RingSpec::make({"y0", "y1"}, FieldSpec::rationals());
    return r;
}

template <class K>
FreeModuleElement<K> combine(const std::vector<Poly<K>>& coords,
                             const std::vector<FreeModuleElement<K>>& gens) {
    auto acc = FreeModuleElement<K>::zero(gens.at(0).module);
    for (std::size_t i = 0; i < gens.size(); ++i) acc = acc + gens[i].times(coords[i]);
    return acc;
}
} // namespace

TEST_CASE("element degree accounts for summand twists") {
    auto r = ring2();
    GradedFreeModule m = GradedFreeModule::of_rank1(r, {-1, 0});
    FreeModuleElement<QQ> e(m, {parse_poly<QQ>(r, "y0^2"), parse_poly<QQ>(r, "y0^3 - y1^3")});
    CHECK(e.is_homogeneous());
    CHECK(e.degree() == twist1(3));
    FreeModuleElement<QQ> bad(m, {parse_poly<QQ>(r, "y0^2"), parse_poly<QQ>(r, "y0^2")});
    CHECK(!bad.is_homogeneous());
    CHECK_THROWS_AS(FreeModuleElement<QQ>::zero(m).degree(), StructureError);
}

TEST_CASE("lift recovers coordinates inside a submodule") {
    auto r = ring2();
    GradedFreeModule m = GradedFreeModule::of_rank1(r, {0, 0});
    std::vector<FreeModuleElement<QQ>> gens = {
        FreeModuleElement<QQ>(m, {parse_poly<QQ>(r, "y0"), parse_poly<QQ>(r, "y1")}),
        FreeModuleElement<QQ>(m, {parse_poly<QQ>(r, "y1"), parse_poly<QQ>(r, "y0")})};

    auto inside = gens[0].times(parse_poly<QQ>(r, "y0")) + gens[1].times(parse_poly<QQ>(r, "y1"));
    auto coords = module_lift(inside, gens);
    REQUIRE(coords.has_value());
    CHECK(combine(*coords, gens) == inside);

    FreeModuleElement<QQ> outside(m, {Poly<QQ>::from_int(r, 1), Poly<QQ>::zero(r)});
    CHECK(!module_lift(outside, gens).has_value());

    auto zero = module_lift(FreeModuleElement<QQ>::zero(m), gens);
    REQUIRE(zero.has_value());
    for (const auto& c : *zero) CHECK(c.is_zero());
}

TEST_CASE("two coprime ring elements have the expected relation") {
    auto r = ring2();
    GradedFreeModule line = GradedFreeModule::of_rank1(r, {0});
    std::vector<FreeModuleElement<QQ>> gens = {
        FreeModuleElement<QQ>(line, {parse_poly<QQ>(r, "y0")}),
        FreeModuleElement<QQ>(line, {parse_poly<QQ>(r, "y1")})};
    auto syz = module_syzygies(gens);
    REQUIRE(!syz.empty());
    // every reported relation annihilates the generators
    for (const auto& s : syz) {
        CHECK(s.module.twists == std::vector<Twist>{twist1(-1), twist1(-1)});
        CHECK(s.is_homogeneous());
        auto acc = Poly<QQ>::zero(r);
        for (std::size_t i = 0; i < gens.size(); ++i) acc = acc + s.comps[i] * gens[i].comps[0];
        CHECK(acc.is_zero());
    }
    // the standard relation lies in the span of the reported ones
    FreeModuleElement<QQ> koszul(syz[0].module,
                                 {parse_poly<QQ>(r, "y1"), parse_poly<QQ>(r, "0 - y0")});
    CHECK(module_lift(koszul, syz).has_value());
}

TEST_CASE("relations among four variables are the pairwise ones") {
    auto r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::rationals());
    GradedFreeModule line = GradedFreeModule::of_rank1(r, {0});
    std::vector<FreeModuleElement<QQ>> gens;
    for (int v = 0; v < 4; ++v)
        gens.push_back(FreeModuleElement<QQ>(line, {Poly<QQ>::var(r, v)}));
    auto syz = module_syzygies(gens);
    for (const auto& s : syz) {
        auto acc = Poly<QQ>::zero(r);
        for (std::size_t i = 0; i < gens.size(); ++i) acc = acc + s.comps[i] * gens[i].comps[0];
        CHECK(acc.is_zero());
        CHECK(s.is_homogeneous());
    }
    // all six pairwise relations x_j e_i - x_i e_j lift through the output
    const GradedFreeModule& sm = syz.at(0).module;
    int lifted = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            auto rel = FreeModuleElement<QQ>::zero(sm);
            rel.comps[static_cast<std::size_t>(i)] = Poly<QQ>::var(r, j);
            rel.comps[static_cast<std::size_t>(j)] = -Poly<QQ>::var(r, i);
            if (module_lift(rel, syz).has_value()) ++lifted;
        }
    CHECK(lifted == 6);
}

TEST_CASE("lift works in higher rank with mixed twists") {
    auto r = ring2();
    GradedFreeModule m = GradedFreeModule::of_rank1(r, {0, -1});
    std::vector<FreeModuleElement<QQ>> gens = {
        FreeModuleElement<QQ>(m, {parse_poly<QQ>(r, "y0^2"), parse_poly<QQ>(r, "y1")}),
        FreeModuleElement<QQ>(m, {parse_poly<QQ>(r, "y0*y1"), parse_poly<QQ>(r, "y0")})};
    for (const auto& g : gens) CHECK(g.is_homogeneous());
    Rng rng(7);
    for (int it = 0; it < 4; ++it) {
        auto a = random_homogeneous<QQ>(r, 2, rng);
        auto b = random_homogeneous<QQ>(r, 2, rng);
        auto target = gens[0].times(a) + gens[1].times(b);
        auto coords = module_lift(target, gens);
        REQUIRE(coords.has_value());
        CHECK(combine(*coords, gens) == target);
        if (!target.is_zero()) CHECK(target.is_homogeneous());
    }
    // no generators means only zero lifts
    std::vector<FreeModuleElement<QQ>> none;
    CHECK(!module_lift(gens[0], none).has_value());
}
