#include <doctest.h>

#include "canproj/projection.hpp"

using namespace canproj;

namespace {

RingPtr uv_ring() {
    static RingPtr r = RingSpec::make({"u0", "u1", "u2", "v"}, FieldSpec::rationals());
    return r;
}

RingPtr y_ring() {
    static RingPtr r = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::prime(31991));
    return r;
}

/// Small sextic shape: v divides the top-left entry, so the entry ideal of
/// the matrix collapses onto the off-diagonal pair.
FormMatrix<QQ> sextic_matrix() {
    auto r = uv_ring();
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2});
    GradedFreeModule source = dual_module(target, {-5, 0});
    auto a11 = parse_poly<QQ>(r, "v^5 + u0^2*v^3 + u1^4*v");
    auto a12 = parse_poly<QQ>(r, "u0^3 + u1^3 + u2^3");
    auto a22 = parse_poly<QQ>(r, "v");
    return FormMatrix<QQ>(source, target, {{a11, a12}, {a12, a22}});
}

ProjectionDatum<QQ> sextic_datum(std::uint64_t seed = 1) {
    return ProjectionDatum<QQ>(4, 0, 6, sextic_matrix(), seed);
}

/// Same shape with seeded coefficients over a word-size prime field.
ProjectionDatum<Fp> seeded_sextic_datum(std::uint64_t seed) {
    auto r = y_ring();
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2});
    GradedFreeModule source = dual_module(target, {-5, 0});
    Rng rng(seed);
    auto v = Poly<Fp>::var(r, 3);
    auto a = random_homogeneous<Fp>(r, 2, rng);
    auto b = random_homogeneous<Fp>(r, 4, rng);
    auto c = random_homogeneous<Fp>(r, 3, rng);
    auto a11 = v * v * v * v * v + a * v * v * v + b * v;
    FormMatrix<Fp> alpha(source, target, {{a11, c}, {c, v}});
    return ProjectionDatum<Fp>(4, 0, 6, std::move(alpha), seed);
}

ProjectionDatum<Fp> diagonal_control(std::uint64_t seed) {
    auto r = y_ring();
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2});
    GradedFreeModule source = dual_module(target, {-5, 0});
    FormMatrix<Fp> alpha(source, target,
                         {{Poly<Fp>::var(r, 0, 5), Poly<Fp>::zero(r)},
                          {Poly<Fp>::zero(r), Poly<Fp>::var(r, 1)}});
    return ProjectionDatum<Fp>(4, 0, 6, std::move(alpha), seed);
}

} // namespace

TEST_CASE("datum shape validation") {
    auto d = sextic_datum();
    CHECK(d.rank_e() == 1);
    CHECK(d.chi() == 5);
    CHECK(!d.is_block());

    auto r = uv_ring();
    // wrong target twists
    GradedFreeModule bad_target = GradedFreeModule::of_rank1(r, {0, -1});
    GradedFreeModule bad_source = dual_module(bad_target, {-5, 0});
    FormMatrix<QQ> bad = FormMatrix<QQ>::zero(bad_source, bad_target);
    bad.entry_mut(0, 0) = parse_poly<QQ>(r, "v^5");
    bad.entry_mut(1, 1) = parse_poly<QQ>(r, "v^2");
    CHECK_THROWS_AS(ProjectionDatum<QQ>(4, 0, 6, bad, 1), StructureError);

    // invariants with cotangent summands refuse a plain matrix
    CHECK_THROWS_AS(ProjectionDatum<QQ>(4, 1, 12, sextic_matrix(), 1), StructureError);

    // invariants outside the presentation inequality
    CHECK_THROWS_AS(ProjectionDatum<QQ>(4, 0, 4, sextic_matrix(), 1), StructureError);

    // block data with mismatched invariants
    auto yr = y_ring();
    Rng rng(5);
    auto bm = seeded_presentation_matrix<Fp>(yr, 4, 0, 6, rng);
    CHECK_THROWS_AS(ProjectionDatum<Fp>(4, 1, 12, bm, 5), StructureError);
}

TEST_CASE("verification passes on the small sextic shape") {
    auto d = sextic_datum();
    auto rep = verify(d);
    CHECK(rep.all_passed());
    for (const char* name : {"symmetric", "det_nonzero", "det_degree", "det_maximal_minors",
                             "ring_condition", "codim", "squarefree_probe"}) {
        auto* e = rep.find(name);
        REQUIRE(e != nullptr);
        CHECK(e->passed());
    }
    auto* frc = rep.find("further_rank_condition");
    REQUIRE(frc != nullptr);
    CHECK(frc->passed());
    CHECK(frc->witness.find("vacuous") != std::string::npos);
    auto* rdp = rep.find("rdp_singularities");
    REQUIRE(rdp != nullptr);
    CHECK(rdp->status == CheckStatus::skipped);
    CHECK(rdp->witness == "skipped: out of scope");

    // same seed, same report
    auto rep2 = verify(d);
    REQUIRE(rep.entries.size() == rep2.entries.size());
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        CHECK(rep.entries[i].name == rep2.entries[i].name);
        CHECK(rep.entries[i].status == rep2.entries[i].status);
        CHECK(rep.entries[i].witness == rep2.entries[i].witness);
    }
}

TEST_CASE("seeded sextic data verify over a prime field") {
    for (std::uint64_t seed : {2u, 3u, 4u}) {
        auto d = seeded_sextic_datum(seed);
        auto rep = verify(d);
        CHECK(rep.all_passed());
    }
}

TEST_CASE("rank drop failure is detected on the diagonal family") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto d = diagonal_control(seed);
        auto rep = verify(d);
        CHECK(!rep.all_passed());
        auto* rc = rep.find("ring_condition");
        REQUIRE(rc != nullptr);
        CHECK(rc->failed());
        CHECK(rc->witness.find("minor not in the truncated ideal") != std::string::npos);
        // the quintuple factor also trips the repeated-root probe
        auto* sq = rep.find("squarefree_probe");
        REQUIRE(sq != nullptr);
        CHECK(sq->failed());
    }
}

TEST_CASE("asymmetric input is reported and the rest still runs") {
    auto r = uv_ring();
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2});
    GradedFreeModule source = dual_module(target, {-5, 0});
    auto sym = sextic_matrix();
    FormMatrix<QQ> alpha(source, target,
                         {{sym.entry(0, 0), sym.entry(0, 1)},
                          {Poly<QQ>::zero(r), sym.entry(1, 1)}});
    ProjectionDatum<QQ> d(4, 0, 6, std::move(alpha), 1);
    auto rep = verify(d);
    CHECK(!rep.all_passed());
    auto* s = rep.find("symmetric");
    REQUIRE(s != nullptr);
    CHECK(s->failed());
    CHECK(s->witness.find("differ") != std::string::npos);
    CHECK(rep.entries.size() == 9);
    CHECK(rep.find("det_degree")->passed());
    CHECK(rep.find("ring_condition")->passed());
}

TEST_CASE("further rank condition on three by three data") {
    auto r = y_ring();
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2, -2});
    GradedFreeModule source = dual_module(target, {-5, 0});
    Rng rng(17);
    auto symmetric_sample = [&](bool corner_zero) {
        FormMatrix<Fp> a = FormMatrix<Fp>::zero(source, target);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i; j < 3; ++j) {
                if (corner_zero && i >= 1 && j >= 1) continue;
                auto f = random_homogeneous<Fp>(r, a.entry_degree(i, j), rng, false);
                a.entry_mut(i, j) = f;
                a.entry_mut(j, i) = f;
            }
        return a;
    };

    // generic symmetric data do not drop rank coherently: the corner has only
    // three distinct linear entries, their common zero is a point, and the
    // cubic column entries miss it
    ProjectionDatum<Fp> generic(4, 0, 7, symmetric_sample(false), 17);
    CHECK(generic.rank_e() == 2);
    auto e = further_rank_condition(generic);
    CHECK(e.failed());
    auto again = further_rank_condition(generic);
    CHECK(again.status == e.status);
    CHECK(again.witness == e.witness);

    ProjectionDatum<Fp> degenerate(4, 0, 7, symmetric_sample(true), 17);
    auto bad = further_rank_condition(degenerate);
    CHECK(bad.failed());
    CHECK(bad.witness.find("corner ideal") != std::string::npos);
}

TEST_CASE("loci of the small sextic") {
    auto d = sextic_datum();
    auto out = loci(d);
    auto r = uv_ring();
    auto c = parse_poly<QQ>(r, "u0^3 + u1^3 + u2^3");
    auto v = parse_poly<QQ>(r, "v");
    CHECK(ideal_equal(out.gamma_ideal, Ideal<QQ>(r, {c, v})));
    CHECK(out.gamma_dim == 1);
    CHECK(out.gamma_degree == 3);
    CHECK(out.gamma_predicted == 4); // the closed formula overshoots here; both are recorded
    CHECK(out.t_ideal.is_unit_ideal());
    CHECK(out.t_dim == -1);
    CHECK(out.t_predicted == 0);
    CHECK(out.adjoint_surface_poly == v);
    CHECK(out.adjoint_degree == 1);

    CHECK(predicted_gamma_degree(12) == 43);
    CHECK(predicted_t_degree(12, 4, 1) == 60);

    // failing datum refuses unless forced
    auto control = diagonal_control(1);
    CHECK_THROWS_AS(loci(control), CheckError);
    auto forced = loci(control, Budget::defaults(), true);
    CHECK(forced.gamma_dim == 2); // the hyperplane y1 = 0
}

TEST_CASE("conductor representative") {
    auto d = sextic_datum();
    auto cond = conductor(d);
    auto r = uv_ring();
    auto c = parse_poly<QQ>(r, "u0^3 + u1^3 + u2^3");
    auto v = parse_poly<QQ>(r, "v");
    CHECK(ideal_equal(cond.ideal, Ideal<QQ>(r, {c, v})));
    CHECK(cond.reliable);
    CHECK(cond.note.empty());

    auto control = diagonal_control(1);
    auto bad = conductor(control);
    CHECK(!bad.reliable);
    CHECK(!bad.note.empty());
    CHECK(ideal_equal(bad.ideal, Ideal<Fp>(y_ring(), {Poly<Fp>::var(y_ring(), 1)})));
}

TEST_CASE("rank-zero quintic datum runs the whole pipeline") {
    auto r = y_ring();
    Rng rng(23);
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0});
    GradedFreeModule source = dual_module(target, {-5, 0});
    FormMatrix<Fp> alpha(source, target, {{random_homogeneous<Fp>(r, 5, rng)}});
    ProjectionDatum<Fp> d(4, 0, 5, std::move(alpha), 23);
    CHECK(d.rank_e() == 0);

    auto rep = verify(d);
    CHECK(rep.all_passed());

    auto out = loci(d);
    CHECK(out.gamma_ideal.is_unit_ideal());
    CHECK(out.gamma_dim == -1);
    CHECK(out.t_ideal.is_unit_ideal());
    CHECK(out.adjoint_degree == -1); // no corner block at rank zero

    auto cond = conductor(d);
    CHECK(cond.ideal.is_unit_ideal());
    CHECK(cond.reliable);

    auto dims = plurigenus_dimensions(d);
    std::vector<long long> want;
    for (long m = 2; m <= 6; ++m) want.push_back(plurigenus_formula(4, 0, 5, m));
    CHECK(dims == want);
    CHECK(want == std::vector<long long>{10, 20, 35, 55, 80});
}

TEST_CASE("matrix factorization certificate") {
    auto d = sextic_datum();
    auto e = matrix_factorization_check(d);
    CHECK(e.passed());

    // corrupting the adjugate is caught with a position witness
    auto alpha = sextic_matrix();
    auto beta = cofactor_adjoint(alpha);
    Rng rng(3);
    beta.entry_mut(0, 1) =
        beta.entry(0, 1) + random_homogeneous<QQ>(uv_ring(), beta.entry_degree(0, 1), rng, false);
    auto bad = matrix_factorization_check(alpha, beta);
    CHECK(bad.failed());
    CHECK(bad.witness.find("adjugate differs") != std::string::npos);
}

TEST_CASE("plurigenus dimensions of the sextic shape") {
    auto d = sextic_datum();
    auto dims = plurigenus_dimensions(d);
    CHECK(dims == std::vector<long long>{11, 23, 41, 65, 95});
    for (long m = 2; m <= 6; ++m)
        CHECK(dims[static_cast<std::size_t>(m - 2)] == plurigenus_formula(4, 0, 6, m));
}

TEST_CASE("duality witness and symmetrization") {
    auto beta0 = sextic_matrix();
    auto r = uv_ring();

    // a symmetric matrix is its own symmetrization, via the identity pair
    Rng rng(31);
    auto w = find_duality_witness(beta0, rng);
    REQUIRE(w.has_value());
    CHECK(w->f == projection_detail::identity_map<QQ>(beta0.target()));
    CHECK(symmetrize(beta0, *w) == beta0);

    // twist by a graded automorphism and recover a symmetric matrix
    Rng arng(37);
    auto u = graded_automorphism_random<QQ>(beta0.target(), arng);
    auto alpha = u.compose(beta0);
    REQUIRE(!alpha.is_symmetric());
    Rng srng(41);
    auto sym = symmetrize(alpha, srng);
    CHECK(sym.valid());
    CHECK(sym.is_symmetric());
    for (int k = 1; k <= 2; ++k)
        CHECK(ideal_equal(minors_ideal(sym, k), minors_ideal(beta0, k)));
    CHECK(!determinant(sym).is_zero());

    // broken twists leave no intertwining pair
    GradedFreeModule target = GradedFreeModule::of_rank1(r, {0, -2});
    GradedFreeModule skew_source = GradedFreeModule::of_rank1(r, {-5, -2});
    FormMatrix<QQ> lopsided = FormMatrix<QQ>::zero(skew_source, target);
    lopsided.entry_mut(0, 0) = parse_poly<QQ>(r, "v^5");
    lopsided.entry_mut(0, 1) = parse_poly<QQ>(r, "u0^2");
    lopsided.entry_mut(1, 1) = parse_poly<QQ>(r, "1");
    Rng lrng(43);
    CHECK(!find_duality_witness(lopsided, lrng).has_value());
    CHECK_THROWS_AS(symmetrize(lopsided, lrng), CheckError);

    // characteristic two is refused up front
    auto r2 = RingSpec::make({"y0", "y1", "y2", "y3"}, FieldSpec::prime(2));
    GradedFreeModule t2 = GradedFreeModule::of_rank1(r2, {0, -2});
    GradedFreeModule s2 = dual_module(t2, {-5, 0});
    FormMatrix<Fp> a2(s2, t2,
                      {{Poly<Fp>::var(r2, 0, 5), Poly<Fp>::zero(r2)},
                       {Poly<Fp>::zero(r2), Poly<Fp>::var(r2, 1)}});
    DualityWitness<Fp> id2{projection_detail::identity_map<Fp>(t2),
                           projection_detail::identity_map<Fp>(s2)};
    CHECK_THROWS_AS(symmetrize(a2, id2), CheckError);
}

TEST_CASE("block data verification") {
    auto r = y_ring();
    Rng rng(7);
    auto bm = seeded_presentation_matrix<Fp>(r, 4, 1, 12, rng);
    ProjectionDatum<Fp> d(4, 1, 12, bm, 7);
    CHECK(d.is_block());
    CHECK(d.rank_e() == 9);

    auto rep = verify(d);
    CHECK(rep.all_passed());
    CHECK(rep.find("symmetric")->passed());
    CHECK(rep.find("block_conformance")->passed());
    CHECK(rep.find("plurigenus")->passed());
    CHECK(rep.find("det_nonzero")->status == CheckStatus::skipped);
    CHECK(rep.find("ring_condition")->status == CheckStatus::skipped);

    auto dims = plurigenus_dimensions(d, 2, 3);
    CHECK(dims == std::vector<long long>{16, 40});

    CHECK_THROWS_AS(loci(d), CheckError);
    CHECK_THROWS_AS(conductor(d), CheckError);
    CHECK_THROWS_AS(matrix_factorization_check(d), CheckError);

    // a non-skew corner block turns up in the conformance entry
    auto broken = bm;
    const auto& src = broken.source_summands();
    const auto& tgt = broken.target_summands();
    std::size_t j = 0, i = 0;
    for (std::size_t jj = 0; jj < src.size(); ++jj)
        if (!src[jj].is_line()) j = jj;
    for (std::size_t ii = 0; ii < tgt.size(); ++ii)
        if (!tgt[ii].is_line()) i = ii;
    broken.set_block(i, j, contraction_cover_map<Fp>(r, 2, 0, 1, 1));
    ProjectionDatum<Fp> bad(4, 1, 12, std::move(broken), 7);
    auto brep = verify(bad);
    CHECK(!brep.all_passed());
    CHECK(brep.find("block_conformance")->failed());
    CHECK(brep.find("block_conformance")->witness.find("skew") != std::string::npos);
}
