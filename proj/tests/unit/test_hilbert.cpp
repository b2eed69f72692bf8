#include <doctest.h>

#include <unordered_map>

#include "canproj/hilbert.hpp"
#include "canproj/linalg.hpp"

using namespace canproj;

namespace {

RingPtr p3() {
    static RingPtr r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::rationals());
    return r;
}

/// dim_K (A/I)_d by rank: I_d is spanned by monomial multiples of the generators.
template <class K>
long long quotient_dim_by_rank(const Ideal<K>& ideal, int d) {
    const auto& ring = ideal.ring();
    auto cols = monomials_of_degree(*ring, static_cast<long>(d));
    std::unordered_map<Monomial, std::size_t, MonomialHash> idx;
    for (std::size_t c = 0; c < cols.size(); ++c) idx[cols[c]] = c;
    std::vector<std::vector<K>> rows;
    for (const auto& g : ideal.generators()) {
        long dg = g.degree();
        if (dg > d) continue;
        for (const auto& m : monomials_of_degree(*ring, static_cast<long>(d) - dg)) {
            auto prod = g.times_term(FieldOps<K>::one(ring->field()), m);
            std::vector<K> row(cols.size(), FieldOps<K>::zero(ring->field()));
            for (const auto& t : prod.terms()) row[idx.at(t.m)] = t.c;
            rows.push_back(std::move(row));
        }
    }
    DenseMatrix<K> mat(rows.size(), cols.size(), ring->field());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) mat.at(i, j) = rows[i][j];
    return static_cast<long long>(cols.size()) - static_cast<long long>(rank(mat));
}

} // namespace

TEST_CASE("quadric-cubic intersection gives a sextic curve") {
    auto r = p3();
    Ideal<QQ> i(r, {parse_poly<QQ>(r, "y0^2 + y1^2 + y2^2 + y3^2"),
                    parse_poly<QQ>(r, "y0^3 + y1^3 + y2^3 + y3^3")});
    auto h = hilbert(i);
    CHECK(h.dimension == 1);
    CHECK(h.degree == 6);
    CHECK(h.numerator.to_string("t") == "1-t^2-t^3+t^5");
    // 6d - 3
    REQUIRE(h.hilbert_polynomial.size() == 2);
    CHECK(h.hilbert_polynomial[0] == QQ(-3));
    CHECK(h.hilbert_polynomial[1] == QQ(6));
    CHECK(h.value_at(0) == 1);
    CHECK(h.value_at(1) == 4);
    CHECK(h.value_at(2) == 9);
    CHECK(h.value_at(3) == 15);
}

TEST_CASE("hyperplane, zero and unit ideals") {
    auto r = p3();
    auto plane = hilbert(Ideal<QQ>(r, {parse_poly<QQ>(r, "y0 - y1")}));
    CHECK(plane.dimension == 2);
    CHECK(plane.degree == 1);
    REQUIRE(plane.hilbert_polynomial.size() == 3);
    CHECK(plane.hilbert_polynomial[2] == QQ(1, 2));

    auto full = hilbert(Ideal<QQ>::zero(r));
    CHECK(full.dimension == 3);
    CHECK(full.degree == 1);
    CHECK(full.value_at(2) == 10);

    auto unit = hilbert(Ideal<QQ>::unit(r));
    CHECK(unit.dimension == -1);
    CHECK(unit.degree == 0);
    CHECK(unit.hilbert_polynomial.empty());
}

TEST_CASE("non-coprime monomial ideal exercises the splitting recursion") {
    auto r = RingSpec::make({"y0", "y1"}, FieldSpec::rationals());
    Ideal<QQ> i(r, {parse_poly<QQ>(r, "y0^2"), parse_poly<QQ>(r, "y0*y1")});
    auto h = hilbert(i);
    CHECK(h.dimension == 0);
    CHECK(h.degree == 1);
    CHECK(h.value_at(0) == 1);
    CHECK(h.value_at(1) == 2);
    CHECK(h.value_at(2) == 1);
    CHECK(h.value_at(7) == 1);
}

TEST_CASE("hilbert data is independent of the monomial order") {
    auto r = p3();
    Rng rng(59);
    for (int it = 0; it < 8; ++it) {
        std::vector<Poly<QQ>> gens;
        int count = 2 + static_cast<int>(rng.below(2));
        for (int j = 0; j < count; ++j)
            gens.push_back(random_homogeneous<QQ>(r, static_cast<long>(1 + rng.below(3)), rng));
        Ideal<QQ> i(r, gens);
        auto a = hilbert(i);
        auto b = hilbert(i, Budget::defaults(), MonomialOrder::lex());
        CHECK(a.numerator.c == b.numerator.c);
        CHECK(a.dimension == b.dimension);
        CHECK(a.degree == b.degree);
        CHECK(a.hilbert_polynomial == b.hilbert_polynomial);
    }
}

TEST_CASE("hilbert function matches graded ranks") {
    auto r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::prime(31991));
    Rng rng(73);
    for (int it = 0; it < 5; ++it) {
        std::vector<Poly<Fp>> gens;
        int count = 2 + static_cast<int>(rng.below(2));
        for (int j = 0; j < count; ++j)
            gens.push_back(random_homogeneous<Fp>(r, static_cast<long>(1 + rng.below(3)), rng));
        Ideal<Fp> i(r, gens);
        auto h = hilbert(i);
        for (int d = 0; d <= 8; ++d)
            CHECK(h.value_at(d) == quotient_dim_by_rank(i, d));
    }
}
