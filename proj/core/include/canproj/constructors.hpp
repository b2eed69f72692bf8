#pragma once

// Constructors for the worked families. Three builders live here:
//   - the symmetric 2x2 sextic datum assembled from three plane conics,
//     together with the rewriting of product-curve forms in the invariants
//     u0, u1, u2, v of the exchange involution;
//   - the bidegree-(3,4) model cut on the incidence threefold over the
//     Heisenberg elliptic curve, with its image certificate;
//   - the relation presentation of the half-weight ring of the degree-18
//     theta cover, with its character bookkeeping.
// All arithmetic is exact; seeded choices are reproducible by construction.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "canproj/errors.hpp"
#include "canproj/field.hpp"
#include "canproj/formmatrix.hpp"
#include "canproj/groebner.hpp"
#include "canproj/hilbert.hpp"
#include "canproj/ideal.hpp"
#include "canproj/linalg.hpp"
#include "canproj/polynomial.hpp"
#include "canproj/projection.hpp"
#include "canproj/ring.hpp"
#include "canproj/rng.hpp"

namespace canproj {

// ---------------------------------------------------------------------------
// rings

/// k[u0, u1, u2, v], standard grading: the invariant coordinates of the
/// exchange involution on the doubled curve.
inline RingPtr sextic_ring(const FieldSpec& field) {
    return RingSpec::make({"u0", "u1", "u2", "v"}, field);
}

/// Coordinate ring of the product of two copies of the double-cover curve:
/// first factor (x, y), second factor (w, z). The bigrading separates the
/// factors, so factor-balanced forms are exactly the bihomogeneous ones of
/// bidegree (d, d).
inline RingPtr product_curve_ring(const FieldSpec& field) {
    Grading g;
    g.rank = 2;
    g.var_degrees = {{1, 0}, {1, 0}, {1, 0},   // x0 x1 x2
                     {0, 1}, {0, 1}, {0, 1},   // w0 w1 w2
                     {1, 0}, {1, 0},           // y3 y4
                     {0, 1}, {0, 1}};          // z3 z4
    return RingSpec::make({"x0", "x1", "x2", "w0", "w1", "w2", "y3", "y4", "z3", "z4"},
                          field, g);
}

// ---------------------------------------------------------------------------
// sextic datum

/// Input data of the sextic construction: three symmetric 3x3 coefficient
/// matrices (the conics of the branch quartic) and a free quartic summand
/// for the top corner entry. b_form must be homogeneous of degree 4 and
/// even in the last variable.
template <class K> struct SexticInput {
    RingPtr uv_ring;
    std::array<std::array<K, 3>, 3> a;
    std::array<std::array<K, 3>, 3> b;
    std::array<std::array<K, 3>, 3> c;
    Poly<K> b_form;
};

/// The middle coefficient of the corner entry admits two readings that
/// differ in one adjugate term; both are computed, the variant picks which
/// one the matrix uses.
enum class AFormVariant { as_written, symmetrized };

template <class K> struct SexticOutput {
    RingPtr x_ring;                        // k[x0, x1, x2]
    RingPtr curve_ring;                    // k[x0, x1, x2, y3, y4]
    Poly<K> quartic_curve;                 // branch quartic in x
    std::vector<Poly<K>> genus5_quadrics;  // y3^2 - Q33, y4^2 - Q44, y3 y4 - Q34
    Poly<K> a_form;                        // chosen middle coefficient, quadratic in u
    Poly<K> a_form_alternate;              // the other reading
    Poly<K> c_form;                        // coupling cubic in u
    FormMatrix<K> alpha_plus;              // twists (0, -2) over the invariant ring
    Poly<K> sextic;                        // det alpha_plus
    AFormVariant variant = AFormVariant::as_written;
};

namespace constructors_detail {

template <class K>
void require_symmetric(const std::array<std::array<K, 3>, 3>& m, const char* which) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (!(m[i][j] - m[j][i]).is_zero())
                throw InputError(std::string("conic matrix ") + which + " is not symmetric");
}

/// Adjugate of a 3x3 matrix: adj * m = det(m) * id. Symmetric in, symmetric out.
template <class K>
std::array<std::array<K, 3>, 3> adjugate(const std::array<std::array<K, 3>, 3>& m) {
    auto co = [&](int i, int j) {
        int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
        int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        // cyclic complement keeps the sign positive
        return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    };
    std::array<std::array<K, 3>, 3> adj;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) adj[j][i] = co(i, j);
    return adj;
}

template <class K>
std::array<std::array<K, 3>, 3> mat_add(const std::array<std::array<K, 3>, 3>& a,
                                        const std::array<std::array<K, 3>, 3>& b) {
    std::array<std::array<K, 3>, 3> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

template <class K>
std::array<std::array<K, 3>, 3> mat_sub(const std::array<std::array<K, 3>, 3>& a,
                                        const std::array<std::array<K, 3>, 3>& b) {
    std::array<std::array<K, 3>, 3> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

/// Quadratic form of a symmetric matrix in three consecutive ring variables.
template <class K>
Poly<K> quadratic_form(const RingPtr& ring, const std::array<std::array<K, 3>, 3>& m,
                       int offset) {
    Poly<K> out = Poly<K>::zero(ring);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out = out + Poly<K>::term(ring, m[i][j],
                                      Monomial::var(offset + i, ring->nvars()) *
                                          Monomial::var(offset + j, ring->nvars()));
    return out;
}

/// Bilinear pairing of two blocks of three consecutive variables.
template <class K>
Poly<K> bilinear_form(const RingPtr& ring, const std::array<std::array<K, 3>, 3>& m,
                      int row_offset, int col_offset) {
    Poly<K> out = Poly<K>::zero(ring);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out = out + Poly<K>::term(ring, m[i][j],
                                      Monomial::var(row_offset + i, ring->nvars()) *
                                          Monomial::var(col_offset + j, ring->nvars()));
    return out;
}

/// Images of u0, u1, u2, v inside the product ring.
template <class K> std::vector<Poly<K>> invariant_images(const RingPtr& prod) {
    auto X = [&](int i) { return Poly<K>::var(prod, i); };
    auto W = [&](int i) { return Poly<K>::var(prod, 3 + i); };
    Poly<K> y3 = Poly<K>::var(prod, 6), y4 = Poly<K>::var(prod, 7);
    Poly<K> z3 = Poly<K>::var(prod, 8), z4 = Poly<K>::var(prod, 9);
    return {X(1) * W(2) - X(2) * W(1),  // u0
            X(0) * W(2) - X(2) * W(0),  // u1
            X(0) * W(1) - X(1) * W(0),  // u2
            y3 * z4 - y4 * z3};         // v
}

/// Work ring with the cover variables in front so the block order reduces
/// them toward the base: [y3, y4, z3, z4, x0, x1, x2, w0, w1, w2].
inline RingPtr rewrite_ring(const FieldSpec& field) {
    Grading g;
    g.rank = 2;
    g.var_degrees = {{1, 0}, {1, 0}, {0, 1}, {0, 1},          // y3 y4 z3 z4
                     {1, 0}, {1, 0}, {1, 0},                  // x0 x1 x2
                     {0, 1}, {0, 1}, {0, 1}};                 // w0 w1 w2
    return RingSpec::make({"y3", "y4", "z3", "z4", "x0", "x1", "x2", "w0", "w1", "w2"},
                          field, g);
}

/// Product-ring index -> rewrite-ring index.
inline const std::vector<int>& product_to_rewrite() {
    static const std::vector<int> map = {4, 5, 6, 7, 8, 9, 0, 1, 2, 3};
    return map;
}

/// The six cover relations in the rewrite ring: squares and products of the
/// fibre variables against the pulled-back conics, on both factors.
template <class K>
std::vector<Poly<K>> cover_relations(const RingPtr& work, const SexticInput<K>& input) {
    std::vector<Poly<K>> rels;
    Poly<K> y3 = Poly<K>::var(work, 0), y4 = Poly<K>::var(work, 1);
    Poly<K> z3 = Poly<K>::var(work, 2), z4 = Poly<K>::var(work, 3);
    rels.push_back(y3 * y3 - quadratic_form(work, input.a, 4));
    rels.push_back(y4 * y4 - quadratic_form(work, input.c, 4));
    rels.push_back(y3 * y4 - quadratic_form(work, input.b, 4));
    rels.push_back(z3 * z3 - quadratic_form(work, input.a, 7));
    rels.push_back(z4 * z4 - quadratic_form(work, input.c, 7));
    rels.push_back(z3 * z4 - quadratic_form(work, input.b, 7));
    return rels;
}

} // namespace constructors_detail

/// Rewrites a factor-balanced form on the doubled curve as a polynomial in
/// the invariants u0, u1, u2, v, modulo the six cover relations. Throws
/// InputError("... not expressible ...") when no such polynomial exists.
/// When several representatives exist (degree high enough to meet forms
/// vanishing on the image), one of them is returned.
template <class K>
Poly<K> express_in_invariants(const Poly<K>& f, const SexticInput<K>& input,
                              const Budget& budget = Budget::defaults()) {
    using namespace constructors_detail;
    const FieldSpec& field = input.uv_ring->field();
    RingPtr prod = product_curve_ring(field);
    if (!f.ring()->compatible(*prod))
        throw InputError("expected a form on the doubled curve ring");
    if (f.is_zero()) return Poly<K>::zero(input.uv_ring);
    if (!f.is_homogeneous())
        throw InputError("not expressible in the invariants: the form is not bihomogeneous");
    auto deg = f.graded_degree();
    if (deg[0] != deg[1])
        throw InputError("not expressible in the invariants: the factor degrees "
                         "are unbalanced");
    long d = deg[0];

    // candidates: every invariant monomial of total degree d, pushed down to
    // the product ring
    std::vector<int> ident(10);
    for (int i = 0; i < 10; ++i) ident[i] = i;
    Poly<K> f_prod = f.map_variables(prod, ident);
    auto images = invariant_images<K>(prod);
    auto candidates = monomials_of_total_degree(4, d);
    std::vector<std::vector<Poly<K>>> powers(4);
    auto power_of = [&](int var, int e) {
        auto& cache = powers[static_cast<std::size_t>(var)];
        if (cache.empty()) cache.push_back(Poly<K>::from_int(prod, 1));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back(cache.back() * images[static_cast<std::size_t>(var)]);
        return cache[static_cast<std::size_t>(e)];
    };

    RingPtr work = rewrite_ring(field);
    auto rels = cover_relations(work, input);
    auto gb = buchberger(work, rels, MonomialOrder::block(4), budget);

    std::vector<Poly<K>> reduced;
    reduced.reserve(candidates.size());
    for (const auto& m : candidates) {
        Poly<K> cand = power_of(0, m.degree_in(0)) * power_of(1, m.degree_in(1)) *
                       power_of(2, m.degree_in(2)) * power_of(3, m.degree_in(3));
        reduced.push_back(normal_form(cand.map_variables(work, product_to_rewrite()), gb, budget));
    }
    Poly<K> target = normal_form(f_prod.map_variables(work, product_to_rewrite()), gb, budget);

    // one linear system over the union of the reduced supports
    std::map<std::array<std::uint16_t, kMaxVars>, std::size_t> row_of;
    auto row_index = [&](const Monomial& m) {
        auto [it, fresh] = row_of.emplace(m.e, row_of.size());
        (void)fresh;
        return it->second;
    };
    for (const auto& r : reduced)
        for (const auto& t : r.terms()) row_index(t.m);
    for (const auto& t : target.terms()) row_index(t.m);

    DenseMatrix<K> a(row_of.size(), reduced.size(), field);
    for (std::size_t j = 0; j < reduced.size(); ++j)
        for (const auto& t : reduced[j].terms()) a.at(row_index(t.m), j) = t.c;
    std::vector<K> rhs(row_of.size(), FieldOps<K>::zero(field));
    for (const auto& t : target.terms()) rhs[row_index(t.m)] = t.c;

    auto sol = solve(a, rhs);
    if (!sol)
        throw InputError("not expressible in the invariants of the exchange involution");
    Poly<K> out = Poly<K>::zero(input.uv_ring);
    for (std::size_t j = 0; j < candidates.size(); ++j)
        if (!(*sol)[j].is_zero())
            out = out + Poly<K>::term(input.uv_ring, (*sol)[j], candidates[j]);
    return out;
}

/// Random sextic input: three random symmetric conic matrices and a random
/// quartic in the u variables alone.
template <class K>
SexticInput<K> random_sextic_input(const RingPtr& uv_ring, Rng& rng) {
    const FieldSpec& field = uv_ring->field();
    auto random_symmetric = [&]() {
        std::array<std::array<K, 3>, 3> m;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                m[i][j] = FieldOps<K>::random(rng, field, false);
                m[j][i] = m[i][j];
            }
        return m;
    };
    SexticInput<K> in{uv_ring, random_symmetric(), random_symmetric(), random_symmetric(),
                      Poly<K>::zero(uv_ring)};
    Poly<K> quartic = Poly<K>::zero(uv_ring);
    for (const auto& m : monomials_of_total_degree(4, 4))
        if (m.degree_in(3) == 0)
            quartic = quartic + Poly<K>::term(uv_ring, FieldOps<K>::random(rng, field, false), m);
    in.b_form = quartic;
    return in;
}

/// Assembles the symmetric 2x2 datum: corner entry v^5 + A v^3 + B v over v,
/// coupled by the determinant cubic C. The output matrix has target twists
/// (0, -2), so its determinant is the degree-6 invariant of the datum.
template <class K>
SexticOutput<K> build_sextic(const SexticInput<K>& input,
                             AFormVariant variant = AFormVariant::as_written,
                             const Budget& budget = Budget::defaults()) {
    using namespace constructors_detail;
    require_symmetric(input.a, "a");
    require_symmetric(input.b, "b");
    require_symmetric(input.c, "c");
    const FieldSpec& field = input.uv_ring->field();
    if (!input.uv_ring->compatible(*sextic_ring(field)))
        throw InputError("sextic input needs the invariant ring k[u0, u1, u2, v]");
    if (!input.b_form.is_zero()) {
        if (!input.b_form.is_homogeneous() || input.b_form.degree() != 4)
            throw InputError("the free corner summand must be a homogeneous quartic");
        for (const auto& t : input.b_form.terms())
            if (t.m.degree_in(3) % 2 != 0)
                throw InputError("the free corner summand must be even in the last variable");
    }

    SexticOutput<K> out;
    out.variant = variant;
    out.x_ring = RingSpec::make({"x0", "x1", "x2"}, field);
    out.curve_ring = RingSpec::make({"x0", "x1", "x2", "y3", "y4"}, field);

    Poly<K> q33 = quadratic_form(out.x_ring, input.a, 0);
    Poly<K> q34 = quadratic_form(out.x_ring, input.b, 0);
    Poly<K> q44 = quadratic_form(out.x_ring, input.c, 0);
    out.quartic_curve = q33 * q44 - q34 * q34;
    if (out.quartic_curve.is_zero())
        throw InputError("the branch quartic vanishes identically");

    std::vector<int> to_curve = {0, 1, 2};
    Poly<K> y3 = Poly<K>::var(out.curve_ring, 3), y4 = Poly<K>::var(out.curve_ring, 4);
    out.genus5_quadrics = {y3 * y3 - q33.map_variables(out.curve_ring, to_curve),
                           y4 * y4 - q44.map_variables(out.curve_ring, to_curve),
                           y3 * y4 - q34.map_variables(out.curve_ring, to_curve)};

    // the two readings of the middle coefficient differ in the final adjugate:
    // adj(a+c) - adj(a) - 3 adj(b) as stated, against the balanced
    // adj(a+c) - adj(a) - adj(c) - 2 adj(b)
    auto adj_ac = adjugate(mat_add(input.a, input.c));
    auto adj_a = adjugate(input.a);
    auto adj_b = adjugate(input.b);
    auto adj_c = adjugate(input.c);
    auto m_written =
        mat_sub(mat_sub(adj_ac, adj_a), mat_add(adj_b, mat_add(adj_b, adj_b)));
    auto m_symmetrized =
        mat_sub(mat_sub(mat_sub(adj_ac, adj_a), adj_c), mat_add(adj_b, adj_b));
    Poly<K> a_written = quadratic_form(input.uv_ring, m_written, 0);
    Poly<K> a_symmetrized = quadratic_form(input.uv_ring, m_symmetrized, 0);
    out.a_form = variant == AFormVariant::as_written ? a_written : a_symmetrized;
    out.a_form_alternate = variant == AFormVariant::as_written ? a_symmetrized : a_written;

    // coupling determinant: rows are the three conics, columns the pure and
    // mixed evaluations on the two factors
    RingPtr prod = product_curve_ring(field);
    std::array<Poly<K>, 3> col_xx, col_wx, col_ww;
    const std::array<std::array<K, 3>, 3>* mats[3] = {&input.a, &input.b, &input.c};
    for (int r = 0; r < 3; ++r) {
        col_xx[r] = quadratic_form(prod, *mats[r], 0);
        col_wx[r] = bilinear_form(prod, *mats[r], 3, 0);
        col_ww[r] = quadratic_form(prod, *mats[r], 3);
    }
    Poly<K> det = col_xx[0] * (col_wx[1] * col_ww[2] - col_wx[2] * col_ww[1]) -
                  col_wx[0] * (col_xx[1] * col_ww[2] - col_xx[2] * col_ww[1]) +
                  col_ww[0] * (col_xx[1] * col_wx[2] - col_xx[2] * col_wx[1]);
    if (det.is_zero())
        throw InputError("the coupling determinant vanishes identically; the three "
                         "conic matrices are dependent");
    out.c_form = express_in_invariants(det, input, budget);

    auto target = GradedFreeModule::of_rank1(input.uv_ring, {0, -2});
    auto source = dual_module(target, Twist{-5, 0});
    FormMatrix<K> alpha = FormMatrix<K>::zero(source, target);
    Poly<K> v = Poly<K>::var(input.uv_ring, 3);
    alpha.entry_mut(0, 0) = v * v * v * v * v + out.a_form * v * v * v + input.b_form * v;
    alpha.entry_mut(0, 1) = out.c_form;
    alpha.entry_mut(1, 0) = out.c_form;
    alpha.entry_mut(1, 1) = v;
    out.sextic = determinant(alpha, budget);
    out.alpha_plus = std::move(alpha);
    return out;
}

// ---------------------------------------------------------------------------
// bidegree-(3,4) model

/// The ambient data of the incidence model: the doubled projective space
/// with its point and plane coordinates, the two Heisenberg quadrics, the
/// incidence form, and the ideal of the flag threefold.
template <class K> struct MainstreamModel {
    RingPtr ring;  // k[x0..x3, h0..h3], bidegree grading
    long lambda = 0;
    std::array<Poly<K>, 2> heisenberg_quadrics;
    Poly<K> incidence_form;
    Ideal<K> ideal_w;
};

/// k[x0..x3, h0..h3] with the point block in bidegree (1, 0) and the plane
/// block in (0, 1).
inline RingPtr mainstream_ring(const FieldSpec& field) {
    return RingSpec::make({"x0", "x1", "x2", "x3", "h0", "h1", "h2", "h3"}, field,
                          Grading::bidegree(8, 4));
}

template <class K>
MainstreamModel<K> mainstream_model(const FieldSpec& field, long lambda) {
    RingPtr r = mainstream_ring(field);
    auto X = [&](int i) { return Poly<K>::var(r, i); };
    auto H = [&](int i) { return Poly<K>::var(r, 4 + i); };
    Poly<K> lam2 = Poly<K>::from_int(r, lambda) * Poly<K>::from_int(r, lambda);
    Poly<K> q = X(0) * X(0) + X(2) * X(2) - lam2 * X(1) * X(3);
    Poly<K> qp = X(1) * X(1) + X(3) * X(3) - lam2 * X(0) * X(2);
    Poly<K> inc = X(0) * H(0) + X(1) * H(1) + X(2) * H(2) + X(3) * H(3);
    Ideal<K> iw(r, {q, qp, inc});
    return MainstreamModel<K>{r, lambda, {q, qp}, inc, std::move(iw)};
}

/// Smoothness probe for the quadric pencil: the base curve is smooth exactly
/// when the two quadrics and the 2x2 minors of their Jacobian have empty
/// projective vanishing locus.
template <class K>
bool pencil_is_smooth(const FieldSpec& field, long lambda,
                      const Budget& budget = Budget::defaults()) {
    RingPtr r = RingSpec::make({"x0", "x1", "x2", "x3"}, field);
    auto X = [&](int i) { return Poly<K>::var(r, i); };
    Poly<K> lam2 = Poly<K>::from_int(r, lambda) * Poly<K>::from_int(r, lambda);
    Poly<K> q = X(0) * X(0) + X(2) * X(2) - lam2 * X(1) * X(3);
    Poly<K> qp = X(1) * X(1) + X(3) * X(3) - lam2 * X(0) * X(2);
    std::vector<Poly<K>> gens = {q, qp};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            gens.push_back(q.derivative(i) * qp.derivative(j) -
                           q.derivative(j) * qp.derivative(i));
    return hilbert(Ideal<K>(r, std::move(gens)), budget).dimension == -1;
}

/// Sections of bidegree (3, 4) vanishing on the four coordinate-plane
/// sections of the flag threefold. kernel spans the constraint kernel inside
/// the monomial basis; iw_piece_dim counts the part that already vanishes on
/// the threefold, so dim is the honest count of surviving sections.
template <class K> struct BoundarySections {
    std::vector<Monomial> basis;          // the (3,4) monomials, fixed order
    std::vector<std::vector<K>> kernel;   // coefficient vectors over basis
    long iw_piece_dim = 0;
    long dim = 0;                         // kernel size minus the ideal piece
};

template <class K>
BoundarySections<K> boundary_sections(const MainstreamModel<K>& model,
                                      const Budget& budget = Budget::defaults()) {
    const RingPtr& r = model.ring;
    const FieldSpec& field = r->field();
    BoundarySections<K> out;
    out.basis = monomials_of_degree(*r, {3, 4});

    auto nf_rows = [&](const Ideal<K>& ideal) {
        auto gb = ideal.groebner(MonomialOrder::grevlex(), budget);
        std::vector<Poly<K>> nf;
        nf.reserve(out.basis.size());
        for (const auto& m : out.basis)
            nf.push_back(normal_form(Poly<K>::term(r, FieldOps<K>::one(field), m), *gb, budget));
        return nf;
    };
    auto kernel_of = [&](const std::vector<std::vector<Poly<K>>>& groups) {
        std::map<std::pair<std::size_t, std::array<std::uint16_t, kMaxVars>>, std::size_t> rows;
        for (std::size_t gidx = 0; gidx < groups.size(); ++gidx)
            for (const auto& p : groups[gidx])
                for (const auto& t : p.terms())
                    rows.emplace(std::make_pair(gidx, t.m.e), rows.size());
        DenseMatrix<K> a(rows.size(), out.basis.size(), field);
        for (std::size_t gidx = 0; gidx < groups.size(); ++gidx)
            for (std::size_t j = 0; j < groups[gidx].size(); ++j)
                for (const auto& t : groups[gidx][j].terms())
                    a.at(rows.at(std::make_pair(gidx, t.m.e)), j) = t.c;
        return kernel_basis(a);
    };

    std::vector<std::vector<Poly<K>>> plane_groups;
    for (int i = 0; i < 4; ++i) {
        Ideal<K> ji = ideal_with(model.ideal_w, Poly<K>::var(r, i));
        plane_groups.push_back(nf_rows(ji));
    }
    out.kernel = kernel_of(plane_groups);
    out.iw_piece_dim =
        static_cast<long>(kernel_of({nf_rows(model.ideal_w)}).size());
    out.dim = static_cast<long>(out.kernel.size()) - out.iw_piece_dim;
    return out;
}

/// Facts recorded while cutting the model; the caller checks them against
/// expectations instead of trusting the construction.
struct MainstreamCertificate {
    bool pencil_smooth = false;
    long section_space_dim = 0;     // sections surviving on the threefold
    long resamples = 0;             // draws discarded before a usable section
    long sigma_generator_count = 0;
    long sigma_degree = 0;
    bool sigma_principal = false;
    long predicted_double_curve_degree = 0;
    long predicted_triple_locus_degree = 0;
    std::array<long, 2> canonical_class_bidegree = {0, 1};
};

template <class K> struct MainstreamOutput {
    RingPtr ring;
    long lambda = 0;
    std::uint64_t seed = 0;
    std::array<Poly<K>, 2> heisenberg_quadrics;
    Poly<K> incidence_form;
    Ideal<K> ideal_w;
    Poly<K> chosen_section;
    Ideal<K> ideal_x;       // boundary components removed
    Ideal<K> sigma_ideal;   // image ideal in the plane coordinates
    MainstreamCertificate certificate;
};

/// Cuts the surface: a seeded section of bidegree (3, 4) through the four
/// boundary plane sections, saturated by the coordinate planes, then
/// projected to the plane factor. The image ideal of a good cut is principal
/// of degree 12.
template <class K>
MainstreamOutput<K> build_mainstream(long lambda, std::uint64_t seed,
                                     const FieldSpec& field,
                                     const Budget& budget = Budget::defaults()) {
    if (!pencil_is_smooth<K>(field, lambda, budget))
        throw InputError("the quadric pencil is singular for this parameter; "
                         "choose a different lambda");
    MainstreamModel<K> model = mainstream_model<K>(field, lambda);
    const RingPtr& r = model.ring;

    BoundarySections<K> sections = boundary_sections(model, budget);
    if (sections.dim <= 0)
        throw StructureError("no sections survive on the threefold");

    MainstreamOutput<K> out;
    out.ring = r;
    out.lambda = lambda;
    out.seed = seed;
    out.heisenberg_quadrics = model.heisenberg_quadrics;
    out.incidence_form = model.incidence_form;
    out.certificate.pencil_smooth = true;
    out.certificate.section_space_dim = sections.dim;

    auto gb_w = model.ideal_w.groebner(MonomialOrder::grevlex(), budget);
    Rng rng(seed);
    Poly<K> g = Poly<K>::zero(r);
    long resamples = 0;
    for (;; ++resamples) {
        if (resamples > 16)
            throw ResourceError("section sampling kept landing inside the threefold ideal");
        std::vector<K> coeff(sections.basis.size(), FieldOps<K>::zero(field));
        for (const auto& vec : sections.kernel) {
            K c = FieldOps<K>::random(rng, field, false);
            for (std::size_t j = 0; j < vec.size(); ++j) coeff[j] = coeff[j] + c * vec[j];
        }
        std::vector<Term<K>> terms;
        for (std::size_t j = 0; j < coeff.size(); ++j)
            if (!coeff[j].is_zero()) terms.push_back({coeff[j], sections.basis[j]});
        g = Poly<K>::from_terms(r, std::move(terms));
        if (!g.is_zero() && !normal_form(g, *gb_w, budget).is_zero()) break;
    }
    out.certificate.resamples = resamples;
    out.chosen_section = g;

    Ideal<K> ix = ideal_with(model.ideal_w, g);
    for (int v = 0; v < 4; ++v) ix = saturate_variable(ix, v, budget);
    out.ideal_x = ix;
    out.ideal_w = std::move(model.ideal_w);

    out.sigma_ideal = eliminate(out.ideal_x, {0, 1, 2, 3}, budget);
    const auto& sgens = out.sigma_ideal.generators();
    out.certificate.sigma_generator_count = static_cast<long>(sgens.size());
    out.certificate.sigma_principal = sgens.size() == 1;
    long sdeg = 0;
    for (const auto& p : sgens)
        if (sdeg == 0 || p.degree() < sdeg) sdeg = p.degree();
    out.certificate.sigma_degree = sdeg;
    out.certificate.predicted_double_curve_degree =
        static_cast<long>(predicted_gamma_degree(12));
    out.certificate.predicted_triple_locus_degree =
        static_cast<long>(predicted_t_degree(12, 4, 1));
    out.certificate.canonical_class_bidegree = {0, 1};
    return out;
}

// ---------------------------------------------------------------------------
// theta cover presentation

struct CoverGenerator {
    std::string name;
    int character = 0;  // label in {0, 1, 2, 3} for the four eigenspaces
};

/// Relation presentation of the half-weight invariant ring of the degree-18
/// cover, with the character bookkeeping of its degree-2 monomials. The
/// no-quadric conclusion is a per-character count comparison, not a proof.
struct CoverPresentation {
    RingPtr ring;        // k[x1, x2, x3, w1, w2, w3] over the rationals
    long variable_weight = 2;
    std::vector<Poly<QQ>> relations;        // six, in two cyclic families
    std::vector<CoverGenerator> generators; // omega, omega1, omega2, omega3
    std::array<long, 4> eigenspace_dims = {0, 0, 0, 0};
    long bicanonical_dim = 0;
    std::array<long, 4> quadric_monomial_counts = {0, 0, 0, 0};
    bool not_a_quadric = false;
    long theta_self_intersection = 2;
    long canonical_self_intersection = 18;
};

inline CoverPresentation build_cover_presentation() {
    CoverPresentation out;
    FieldSpec field = FieldSpec::rationals();
    out.ring = RingSpec::make({"x1", "x2", "x3", "w1", "w2", "w3"}, field);
    auto X = [&](int i) { return Poly<QQ>::var(out.ring, i - 1); };
    auto W = [&](int i) { return Poly<QQ>::var(out.ring, 2 + i); };
    // squares of the w classes against products of the x classes, and the
    // mixed family, both cyclic in the indices
    out.relations = {W(1) * W(1) - X(2) * X(3), W(2) * W(2) - X(3) * X(1),
                     W(3) * W(3) - X(1) * X(2), W(1) * X(1) - W(2) * W(3),
                     W(2) * X(2) - W(3) * W(1), W(3) * X(3) - W(1) * W(2)};

    // self-check against the square-root parametrization x_i = s_i^2,
    // w_i = s_j s_k; every relation must collapse
    RingPtr s_ring = RingSpec::make({"s1", "s2", "s3"}, field);
    auto S = [&](int i) { return Poly<QQ>::var(s_ring, i - 1); };
    std::vector<Poly<QQ>> images = {S(1) * S(1), S(2) * S(2), S(3) * S(3),
                                    S(2) * S(3), S(3) * S(1), S(1) * S(2)};
    for (const auto& rel : out.relations)
        if (!rel.substitute(images).is_zero())
            throw StructureError("cover relations fail the square-root parametrization");

    out.generators = {{"omega", 0}, {"omega1", 1}, {"omega2", 2}, {"omega3", 3}};
    // eigenspace dimensions from the ample classes on the abelian surface:
    // h^0(L) = L^2 / 2, with the invariant part under the triple class and
    // the others dropped by one theta
    long theta_sq = out.theta_self_intersection;
    out.eigenspace_dims = {9 * theta_sq / 2, 4 * theta_sq / 2, 4 * theta_sq / 2,
                           4 * theta_sq / 2};
    out.bicanonical_dim = out.eigenspace_dims[0] + out.eigenspace_dims[1] +
                          out.eigenspace_dims[2] + out.eigenspace_dims[3];

    // degree-2 monomials in the four generators, sorted by character sum
    out.quadric_monomial_counts = {0, 0, 0, 0};
    for (std::size_t i = 0; i < out.generators.size(); ++i)
        for (std::size_t j = i; j < out.generators.size(); ++j) {
            int ch = out.generators[i].character ^ out.generators[j].character;
            out.quadric_monomial_counts[static_cast<std::size_t>(ch)]++;
        }
    out.not_a_quadric = true;
    for (int ch = 0; ch < 4; ++ch)
        if (out.quadric_monomial_counts[static_cast<std::size_t>(ch)] >
            out.eigenspace_dims[static_cast<std::size_t>(ch)])
            out.not_a_quadric = false;
    return out;
}

} // namespace canproj
