#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "canproj/hilbert.hpp"
#include "canproj/monad.hpp"

namespace canproj {

enum class CheckStatus { pass, fail, skipped };

inline std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "skipped";
    }
}

/// One named verification condition. The witness explains a failure, a skip,
/// or (rarely) annotates a vacuous pass; it is empty for ordinary passes.
struct CheckEntry {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::string witness;

    bool passed() const { return status == CheckStatus::pass; }
    bool failed() const { return status == CheckStatus::fail; }
};

/// Pure data; rerunning verification with the same seed reproduces it.
struct VerificationReport {
    std::vector<CheckEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries)
            if (e.failed()) return false;
        return true;
    }
    const CheckEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

/// A candidate presentation matrix together with the surface invariants it
/// claims. Plain matrices carry a free cover (every bundle summand a line
/// bundle); invariants with cotangent summands need blockwise data.
template <class K> struct ProjectionDatum {
    long pg = 4;
    long q = 0;
    long ksq = 5;
    std::uint64_t seed = 0;
    std::variant<FormMatrix<K>, BlockMatrix<K>> alpha;

    ProjectionDatum(long pg_, long q_, long ksq_, FormMatrix<K> a, std::uint64_t seed_ = 0)
        : pg(pg_), q(q_), ksq(ksq_), seed(seed_), alpha(std::move(a)) {
        BundleSum f = expected_bundle(pg, q, ksq);
        for (const auto& s : f.flattened())
            if (!s.is_line())
                throw StructureError("these invariants carry cotangent summands; supply block data");
        const FormMatrix<K>& m = matrix();
        if (!m.is_square()) throw StructureError("presentation matrix must be square");
        auto flat = f.flattened();
        if (m.target().twists.size() != flat.size())
            throw StructureError("matrix rank does not match the expected bundle");
        for (std::size_t i = 0; i < flat.size(); ++i)
            if (m.target().twists[i] != Twist{flat[i].a, 0})
                throw StructureError("target twists do not match the expected bundle");
    }

    ProjectionDatum(long pg_, long q_, long ksq_, BlockMatrix<K> a, std::uint64_t seed_ = 0)
        : pg(pg_), q(q_), ksq(ksq_), seed(seed_), alpha(std::move(a)) {
        BundleSum f = expected_bundle(pg, q, ksq);
        if (!(blocks().target() == f))
            throw StructureError("target summands do not match the expected bundle");
    }

    bool is_block() const { return alpha.index() == 1; }
    const FormMatrix<K>& matrix() const {
        if (is_block()) throw StructureError("datum holds block data, not a plain matrix");
        return std::get<0>(alpha);
    }
    const BlockMatrix<K>& blocks() const {
        if (!is_block()) throw StructureError("datum holds a plain matrix, not block data");
        return std::get<1>(alpha);
    }

    /// Rank of the bundle without its structure summand.
    long rank_e() const {
        if (is_block()) return blocks().target().total_rank() - 1;
        return static_cast<long>(matrix().rows()) - 1;
    }
    long chi() const { return 1 + pg - q; }
};

/// Holomorphic Euler characteristic shifted by the multiple twist: the graded
/// piece dimension a valid presentation must hit in degree m.
inline long long plurigenus_formula(long pg, long q, long ksq, long m) {
    return (1 + pg - q) + m * (m - 1) / 2 * ksq;
}

/// Closed-form degree of the rank-drop curve on a degree-d symmetroid.
inline long long predicted_gamma_degree(long long d) { return d * (d - 5) / 2 + 1; }

/// Closed-form degree of the deeper drop locus; always an integer since
/// d^3 - 15d^2 + 74d is d(d-1)(d-2) modulo 6.
inline long long predicted_t_degree(long long d, long pg, long q) {
    return d * (d * d - 15 * d + 74) / 6 - 4 * (1 - q + pg);
}

namespace projection_detail {

template <class Body> CheckEntry checked(std::string name, Body&& body) {
    CheckEntry e;
    e.name = std::move(name);
    try {
        std::optional<std::string> w = body();
        if (w) {
            e.status = CheckStatus::fail;
            e.witness = std::move(*w);
        } else {
            e.status = CheckStatus::pass;
        }
    } catch (const ResourceError&) {
        e.status = CheckStatus::skipped;
        e.witness = "skipped: budget";
    }
    return e;
}

inline CheckEntry skipped_entry(std::string name, std::string why) {
    CheckEntry e;
    e.name = std::move(name);
    e.status = CheckStatus::skipped;
    e.witness = std::move(why);
    return e;
}

inline std::string truncated(std::string s, std::size_t limit = 120) {
    if (s.size() > limit) {
        s.resize(limit);
        s += "...";
    }
    return s;
}

/// First generator of a that fails to reduce to zero against b, if any.
template <class K>
std::optional<std::string> containment_witness(const Ideal<K>& a, const Ideal<K>& b,
                                               const Budget& budget, const std::string& label) {
    for (const auto& g : a.generators())
        if (!b.contains(g, budget))
            return label + ": " + truncated(g.to_string());
    return std::nullopt;
}

template <class K> int uni_degree(const std::vector<K>& c) {
    for (std::size_t i = c.size(); i-- > 0;)
        if (!c[i].is_zero()) return static_cast<int>(i);
    return -1;
}

/// Dense coefficient vector of a univariate polynomial, low degree first.
template <class K> std::vector<K> uni_coeffs(const Poly<K>& f) {
    const FieldSpec& field = f.ring()->field();
    std::vector<K> c(static_cast<std::size_t>(std::max(f.degree(), 0)) + 1,
                     FieldOps<K>::zero(field));
    for (const auto& t : f.terms()) {
        std::size_t d = static_cast<std::size_t>(t.m.total_degree());
        c[d] = c[d] + t.c;
    }
    return c;
}

template <class K> std::vector<K> uni_remainder(std::vector<K> a, const std::vector<K>& b) {
    int db = uni_degree(b);
    K lead_inv = b[static_cast<std::size_t>(db)].inv();
    for (int da = uni_degree(a); da >= db; da = uni_degree(a)) {
        K q = a[static_cast<std::size_t>(da)] * lead_inv;
        for (int i = 0; i <= db; ++i) {
            std::size_t pos = static_cast<std::size_t>(da - db + i);
            a[pos] = a[pos] - q * b[static_cast<std::size_t>(i)];
        }
    }
    return a;
}

/// gcd(f, f') is constant. A vanishing derivative in small characteristic
/// means a p-th power, so it counts as a repeated factor.
template <class K> bool uni_squarefree(const Poly<K>& f) {
    const FieldSpec& field = f.ring()->field();
    std::vector<K> a = uni_coeffs(f);
    std::vector<K> b(a.size(), FieldOps<K>::zero(field));
    for (std::size_t i = 1; i < a.size(); ++i)
        b[i - 1] = a[i] * FieldOps<K>::from_int(static_cast<std::int64_t>(i), field);
    if (uni_degree(b) < 0) return false;
    while (uni_degree(b) >= 0) {
        std::vector<K> r = uni_remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return uni_degree(a) == 0;
}

/// Restriction of f to the pencil of points a*s + b; degree drops exactly
/// when the top form of f vanishes on the direction a.
template <class K> Poly<K> restrict_to_line(const Poly<K>& f, const RingPtr& line_ring, Rng& rng) {
    const RingPtr& ring = f.ring();
    const FieldSpec& field = ring->field();
    std::vector<Poly<K>> images;
    Poly<K> s = Poly<K>::var(line_ring, 0);
    for (int i = 0; i < ring->nvars(); ++i) {
        K ai = FieldOps<K>::random(rng, field, false);
        K bi = FieldOps<K>::random(rng, field, false);
        images.push_back(s.times_scalar(ai) + Poly<K>::constant(line_ring, bi));
    }
    return f.substitute(images);
}

template <class K>
std::optional<std::string> squarefree_probe(const Poly<K>& det, std::uint64_t seed) {
    Rng rng(seed ^ 0x9d2c5680u);
    RingPtr line_ring = RingSpec::make({"s"}, det.ring()->field());
    int found = 0, tries = 0;
    while (found < 3 && tries < 24) {
        ++tries;
        Poly<K> f = restrict_to_line(det, line_ring, rng);
        if (f.degree() != det.degree()) continue;
        if (!uni_squarefree(f))
            return std::string("restriction to a seeded line has a repeated root");
        ++found;
    }
    if (found < 3) return std::string("skipped: degenerate line restrictions");
    return std::nullopt;
}

template <class K>
FormMatrix<K> delete_first_column(const FormMatrix<K>& m) {
    std::vector<std::size_t> keep_rows, keep_cols;
    for (std::size_t i = 0; i < m.rows(); ++i) keep_rows.push_back(i);
    for (std::size_t j = 1; j < m.cols(); ++j) keep_cols.push_back(j);
    return m.submatrix(keep_rows, keep_cols);
}

template <class K> FormMatrix<K> identity_map(const GradedFreeModule& m) {
    FormMatrix<K> id = FormMatrix<K>::zero(m, m);
    for (std::size_t i = 0; i < m.rank(); ++i)
        id.entry_mut(i, i) = Poly<K>::from_int(m.ring, 1);
    return id;
}

} // namespace projection_detail

template <class K>
CheckEntry further_rank_condition(const ProjectionDatum<K>& datum,
                                  const Budget& budget = Budget::defaults());

/// Structural verification: symmetry, determinant degree and maximal-minor
/// agreement, the rank drop under column deletion, the codimension of the
/// drop locus, and a seeded repeated-factor probe on the determinant. The
/// probe stands in for irreducibility, which is never decided exactly: a
/// clean report means no obstruction was found. Rank-two degeneracy of the
/// branch surface is out of scope and always reported skipped.
template <class K>
VerificationReport verify(const ProjectionDatum<K>& datum, const Budget& budget = Budget::defaults()) {
    using namespace projection_detail;
    VerificationReport rep;
    const long r = datum.rank_e();

    if (datum.is_block()) {
        const BlockMatrix<K>& b = datum.blocks();
        rep.entries.push_back(checked("symmetric", [&]() -> std::optional<std::string> {
            if (!(b.source() == b.target().dual5()))
                return "source summands are not the -5 duals of the target summands";
            return std::nullopt;
        }));
        rep.entries.push_back(checked("block_conformance", [&]() -> std::optional<std::string> {
            auto findings = validate_blocks(b, datum.pg, datum.q, datum.ksq);
            if (findings.empty()) return std::nullopt;
            std::string w = findings.front();
            if (findings.size() > 1)
                w += " (+" + std::to_string(findings.size() - 1) + " more)";
            return w;
        }));
        for (const char* name :
             {"det_nonzero", "det_degree", "det_maximal_minors", "ring_condition", "codim",
              "squarefree_probe"})
            rep.entries.push_back(skipped_entry(name, "skipped: available only for free-module data"));
        rep.entries.push_back(checked("plurigenus", [&]() -> std::optional<std::string> {
            std::optional<FormMatrix<K>> pres;
            try {
                pres = monad_to_presentation(b);
            } catch (const StructureError& e) {
                return std::string(e.what());
            }
            for (long m = 2; m <= 3; ++m) {
                long long got = presentation_coker_dim(*pres, m);
                long long want = plurigenus_formula(datum.pg, datum.q, datum.ksq, m);
                if (got != want)
                    return "degree " + std::to_string(m) + " piece has dimension " +
                           std::to_string(got) + ", expected " + std::to_string(want);
            }
            return std::nullopt;
        }));
        rep.entries.push_back(
            skipped_entry("further_rank_condition", "skipped: available only for free-module data"));
        rep.entries.push_back(skipped_entry("rdp_singularities", "skipped: out of scope"));
        return rep;
    }

    const FormMatrix<K>& a = datum.matrix();

    rep.entries.push_back(checked("symmetric", [&]() -> std::optional<std::string> {
        if (!a.has_symmetric_layout())
            return "source twists are not the -5 duals of the target twists";
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = i + 1; j < a.cols(); ++j)
                if (!(a.entry(i, j) == a.entry(j, i)))
                    return "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") and (" + std::to_string(j + 1) + "," + std::to_string(i + 1) +
                           ") differ";
        return std::nullopt;
    }));

    std::optional<Poly<K>> det;
    rep.entries.push_back(checked("det_nonzero", [&]() -> std::optional<std::string> {
        det = determinant(a, budget);
        if (det->is_zero()) return std::string("determinant vanishes");
        return std::nullopt;
    }));

    if (!det) {
        rep.entries.push_back(skipped_entry("det_degree", "skipped: budget"));
        rep.entries.push_back(skipped_entry("det_maximal_minors", "skipped: budget"));
    } else {
        rep.entries.push_back(checked("det_degree", [&]() -> std::optional<std::string> {
            if (det->is_zero()) return std::string("determinant vanishes");
            if (det->degree() != datum.ksq)
                return "determinant has degree " + std::to_string(det->degree()) + ", expected " +
                       std::to_string(datum.ksq);
            return std::nullopt;
        }));
        rep.entries.push_back(checked("det_maximal_minors", [&]() -> std::optional<std::string> {
            Ideal<K> di(a.ring(), {*det});
            Ideal<K> mi = minors_ideal(a, static_cast<int>(r) + 1, budget);
            if (auto w = containment_witness(mi, di, budget, "maximal minor outside (det)")) return w;
            if (auto w = containment_witness(di, mi, budget, "determinant outside the minor ideal"))
                return w;
            return std::nullopt;
        }));
    }

    std::optional<Ideal<K>> drop_ideal;
    if (a.rows() < 2) {
        // no column to delete at rank zero; both minor ideals are I_0
        CheckEntry e;
        e.name = "ring_condition";
        e.status = CheckStatus::pass;
        e.witness = "vacuous: I_0 = (1) on both sides";
        rep.entries.push_back(e);
        drop_ideal = Ideal<K>::unit(a.ring());
    } else {
        FormMatrix<K> a_prime = delete_first_column(a);
        rep.entries.push_back(checked("ring_condition", [&]() -> std::optional<std::string> {
            Ideal<K> full = minors_ideal(a, static_cast<int>(r), budget);
            drop_ideal = minors_ideal(a_prime, static_cast<int>(r), budget);
            // minors of the truncated matrix sit inside the full minor ideal,
            // so one containment decides equality
            return containment_witness(full, *drop_ideal, budget,
                                       "minor not in the truncated ideal");
        }));
    }

    rep.entries.push_back(checked("codim", [&]() -> std::optional<std::string> {
        if (!drop_ideal)
            drop_ideal = minors_ideal(delete_first_column(a), static_cast<int>(r), budget);
        HilbertData h = hilbert(*drop_ideal, budget);
        if (h.dimension > 1)
            return "rank-drop locus has projective dimension " + std::to_string(h.dimension);
        return std::nullopt;
    }));

    rep.entries.push_back(checked("squarefree_probe", [&]() -> std::optional<std::string> {
        if (!det) throw ResourceError("determinant unavailable");
        if (det->is_zero()) return std::string("determinant vanishes");
        auto w = projection_detail::squarefree_probe(*det, datum.seed);
        if (w && w->rfind("skipped:", 0) == 0) {
            // surfaced as a skip, not a failure
            throw ResourceError(*w);
        }
        return w;
    }));
    if (rep.entries.back().status == CheckStatus::skipped && det && !det->is_zero())
        rep.entries.back().witness = "skipped: degenerate line restrictions";

    rep.entries.push_back(further_rank_condition(datum, budget));
    rep.entries.push_back(skipped_entry("rdp_singularities", "skipped: out of scope"));
    return rep;
}

/// Equality of the next minor ideals after deleting the first column and then
/// additionally the first row. Vacuous below size two.
template <class K>
CheckEntry further_rank_condition(const ProjectionDatum<K>& datum, const Budget& budget) {
    using namespace projection_detail;
    if (datum.is_block())
        return skipped_entry("further_rank_condition", "skipped: available only for free-module data");
    const long r = datum.rank_e();
    if (r < 2) {
        CheckEntry e;
        e.name = "further_rank_condition";
        e.status = CheckStatus::pass;
        e.witness = "vacuous: I_0 = (1) on both sides";
        return e;
    }
    const FormMatrix<K>& a = datum.matrix();
    return checked("further_rank_condition", [&]() -> std::optional<std::string> {
        Ideal<K> col = minors_ideal(delete_first_column(a), static_cast<int>(r) - 1, budget);
        Ideal<K> corner = minors_ideal(a.drop_first_row_and_column(), static_cast<int>(r) - 1, budget);
        // corner minors are among the column-deleted ones
        return containment_witness(col, corner, budget, "minor not in the corner ideal");
    });
}

/// Degeneracy loci of the truncated matrices with their expected degrees.
/// Both the computed and the predicted numbers are recorded even when they
/// disagree; the adjoint polynomial is the determinant of the corner block.
template <class K> struct LociResult {
    Ideal<K> gamma_ideal;
    int gamma_dim = -1;
    long long gamma_degree = 0;
    long long gamma_predicted = 0;
    Ideal<K> t_ideal;
    int t_dim = -1;
    long long t_degree = 0;
    long long t_predicted = 0;
    Poly<K> adjoint_surface_poly;
    int adjoint_degree = -1;
};

template <class K>
LociResult<K> loci(const ProjectionDatum<K>& datum, const Budget& budget = Budget::defaults(),
                   bool force = false) {
    using namespace projection_detail;
    if (datum.is_block()) throw CheckError("loci computed only for free-cover data");
    if (!force) {
        VerificationReport rep = verify(datum, budget);
        if (!rep.all_passed())
            throw CheckError("verification failed; pass force to compute loci anyway");
    }
    const FormMatrix<K>& a = datum.matrix();
    const RingPtr& ring = a.ring();
    const long r = datum.rank_e();
    const long long d = datum.ksq;

    LociResult<K> out{Ideal<K>::zero(ring), -1, 0, 0, Ideal<K>::zero(ring),
                      -1,                   0,  0, Poly<K>::zero(ring), -1};
    out.gamma_ideal = r >= 1 ? minors_ideal(delete_first_column(a), static_cast<int>(r), budget)
                             : Ideal<K>::unit(ring);
    HilbertData hg = hilbert(out.gamma_ideal, budget);
    out.gamma_dim = hg.dimension;
    out.gamma_degree = hg.degree;
    out.gamma_predicted = predicted_gamma_degree(d);

    if (r >= 1) {
        FormMatrix<K> a_corner = a.drop_first_row_and_column();
        out.t_ideal = r >= 2 ? minors_ideal(a_corner, static_cast<int>(r) - 1, budget)
                             : Ideal<K>::unit(ring);
        out.adjoint_surface_poly = determinant(a_corner, budget);
        out.adjoint_degree = out.adjoint_surface_poly.degree();
    } else {
        out.t_ideal = Ideal<K>::unit(ring);
    }
    HilbertData ht = hilbert(out.t_ideal, budget);
    out.t_dim = ht.dimension;
    out.t_degree = ht.degree;
    out.t_predicted = predicted_t_degree(d, datum.pg, datum.q);
    return out;
}

/// Ambient representative of the conductor: the truncated minor ideal
/// together with the determinant. Meaningful only when the rank drop under
/// column deletion has been confirmed, so the result carries that flag.
template <class K> struct ConductorResult {
    Ideal<K> ideal;
    bool reliable = false;
    std::string note;
};

template <class K>
ConductorResult<K> conductor(const ProjectionDatum<K>& datum,
                             const Budget& budget = Budget::defaults()) {
    using namespace projection_detail;
    if (datum.is_block()) throw CheckError("conductor computed only for free-cover data");
    const FormMatrix<K>& a = datum.matrix();
    const long r = datum.rank_e();

    Ideal<K> drop = r >= 1 ? minors_ideal(delete_first_column(a), static_cast<int>(r), budget)
                           : Ideal<K>::unit(a.ring());
    Poly<K> det = determinant(a, budget);
    Ideal<K> rep = ideal_with(drop, det).simplified(budget);

    ConductorResult<K> out{rep, false, ""};
    try {
        Ideal<K> full = minors_ideal(a, static_cast<int>(r), budget);
        auto w = containment_witness(full, drop, budget, "witness");
        out.reliable = !w.has_value();
        if (w) out.note = "rank-drop ideals differ; the representative may not be the conductor";
    } catch (const ResourceError&) {
        out.note = "rank-drop comparison exceeded the budget";
    }
    return out;
}

/// Adjugate identity checked entrywise for an explicitly supplied candidate.
template <class K>
CheckEntry matrix_factorization_check(const FormMatrix<K>& alpha, const FormMatrix<K>& beta,
                                      const Budget& budget = Budget::defaults()) {
    using namespace projection_detail;
    if (!alpha.is_square()) throw StructureError("matrix factorization needs a square matrix");
    return checked("matrix_factorization", [&]() -> std::optional<std::string> {
        Poly<K> det = determinant(alpha, budget);
        Twist ddeg{0, 0};
        for (std::size_t i = 0; i < alpha.rows(); ++i)
            ddeg = twist_add(ddeg, alpha.entry_degree(i, i));
        FormMatrix<K> right = alpha.shifted(ddeg).compose(beta);
        FormMatrix<K> left = beta.compose(alpha);
        for (std::size_t i = 0; i < alpha.rows(); ++i)
            for (std::size_t j = 0; j < alpha.cols(); ++j) {
                Poly<K> want = i == j ? det : Poly<K>::zero(alpha.ring());
                if (!(right.entry(i, j) == want))
                    return "product with the adjugate differs at (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") on the right";
                if (!(left.entry(i, j) == want))
                    return "product with the adjugate differs at (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") on the left";
            }
        return std::nullopt;
    });
}

/// Same check with the adjugate computed in place; certifies the two-periodic
/// resolution the matrix induces over its determinant hypersurface.
template <class K>
CheckEntry matrix_factorization_check(const ProjectionDatum<K>& datum,
                                      const Budget& budget = Budget::defaults()) {
    if (datum.is_block())
        throw CheckError("matrix factorization checked only for free-cover data");
    const FormMatrix<K>& a = datum.matrix();
    return matrix_factorization_check(a, cofactor_adjoint(a, budget), budget);
}

/// Chain pair (f, g) with f.alpha = alpha^t.g, both invertible: the data of a
/// cokernel self-duality at matrix level.
template <class K> struct DualityWitness {
    FormMatrix<K> f;
    FormMatrix<K> g;
};

namespace projection_detail {

/// Unknown block for one endomorphism entry: its monomial basis.
struct WitnessSlot {
    bool in_f = true;
    std::size_t i = 0, j = 0;
    std::vector<Monomial> basis;
    std::size_t offset = 0;
};

template <class K>
std::vector<WitnessSlot> endo_slots(const GradedFreeModule& m, bool in_f, std::size_t& offset) {
    std::vector<WitnessSlot> slots;
    for (std::size_t i = 0; i < m.rank(); ++i)
        for (std::size_t j = 0; j < m.rank(); ++j) {
            Twist d = twist_sub(m.twists[i], m.twists[j]);
            if (d[1] != 0 || d[0] < 0) continue;
            WitnessSlot s;
            s.in_f = in_f;
            s.i = i;
            s.j = j;
            s.basis = monomials_of_total_degree(m.ring->nvars(), static_cast<int>(d[0]));
            s.offset = offset;
            offset += s.basis.size();
            slots.push_back(std::move(s));
        }
    return slots;
}

template <class K>
FormMatrix<K> endo_from_solution(const GradedFreeModule& m, const std::vector<WitnessSlot>& slots,
                                 bool in_f, const std::vector<K>& sol) {
    FormMatrix<K> out = FormMatrix<K>::zero(m, m);
    for (const auto& s : slots) {
        if (s.in_f != in_f) continue;
        std::vector<Term<K>> terms;
        for (std::size_t k = 0; k < s.basis.size(); ++k) {
            const K& c = sol[s.offset + k];
            if (!c.is_zero()) terms.push_back({c, s.basis[k]});
        }
        out.entry_mut(s.i, s.j) = Poly<K>::from_terms(m.ring, std::move(terms));
    }
    return out;
}

} // namespace projection_detail

/// Searches the solution space of f.alpha = alpha^t.g for a pair with
/// constant nonzero determinants. Degree-zero endomorphism determinants are
/// automatically constant, so invertibility is a single field test. Returns
/// nothing when the intertwining space contains no invertible pair.
template <class K>
std::optional<DualityWitness<K>> find_duality_witness(const FormMatrix<K>& alpha, Rng& rng,
                                                      const Budget& budget = Budget::defaults(),
                                                      int attempts = 8) {
    using namespace projection_detail;
    if (!alpha.has_symmetric_layout()) return std::nullopt;
    const RingPtr& ring = alpha.ring();
    const FieldSpec& field = ring->field();
    const GradedFreeModule& f_mod = alpha.target();
    const GradedFreeModule& g_mod = alpha.source();
    const std::size_t n = alpha.rows();

    if (alpha.is_symmetric())
        return DualityWitness<K>{identity_map<K>(f_mod), identity_map<K>(g_mod)};

    std::size_t unknowns = 0;
    std::vector<WitnessSlot> slots = endo_slots<K>(f_mod, true, unknowns);
    {
        auto g_slots = endo_slots<K>(g_mod, false, unknowns);
        slots.insert(slots.end(), g_slots.begin(), g_slots.end());
    }

    // one row per coefficient of each entry of f.alpha - alpha^t.g
    std::size_t rows = 0;
    std::vector<std::vector<Monomial>> cell_basis(n * n);
    std::vector<std::size_t> cell_offset(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Twist d = twist_sub(f_mod.twists[i], g_mod.twists[j]);
            if (d[1] != 0) throw InputError("duality search needs a standard grading");
            std::size_t cell = i * n + j;
            cell_offset[cell] = rows;
            if (d[0] >= 0) {
                cell_basis[cell] = monomials_of_total_degree(ring->nvars(), static_cast<int>(d[0]));
                rows += cell_basis[cell].size();
            }
        }

    DenseMatrix<K> sys(rows, unknowns, field);
    auto add_coeff = [&](std::size_t cell, const Monomial& mono, std::size_t col, const K& c) {
        const auto& basis = cell_basis[cell];
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (basis[k] == mono) {
                std::size_t row = cell_offset[cell] + k;
                sys.at(row, col) = sys.at(row, col) + c;
                return;
            }
        throw StructureError("entry monomial escapes its degree cell");
    };
    for (const auto& s : slots) {
        for (std::size_t k = 0; k < s.basis.size(); ++k) {
            std::size_t col = s.offset + k;
            if (s.in_f) {
                // f(i,k')*alpha(k',j) contributes to cell (i,j)
                for (std::size_t j = 0; j < n; ++j) {
                    const Poly<K>& entry = alpha.entry(s.j, j);
                    for (const auto& t : entry.terms())
                        add_coeff(s.i * n + j, s.basis[k] * t.m, col, t.c);
                }
            } else {
                // alpha^t(i,k')*g(k',j) = alpha(k',i)*g(k',j), negated
                for (std::size_t i = 0; i < n; ++i) {
                    const Poly<K>& entry = alpha.entry(s.i, i);
                    for (const auto& t : entry.terms())
                        add_coeff(i * n + s.j, s.basis[k] * t.m, col, -t.c);
                }
            }
        }
    }

    std::vector<std::vector<K>> basis = kernel_basis(sys);
    if (basis.empty()) return std::nullopt;

    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<K> sol(unknowns, FieldOps<K>::zero(field));
        for (const auto& vec : basis) {
            K c = FieldOps<K>::random(rng, field, false);
            for (std::size_t u = 0; u < unknowns; ++u) sol[u] = sol[u] + c * vec[u];
        }
        FormMatrix<K> f = endo_from_solution(f_mod, slots, true, sol);
        FormMatrix<K> g = endo_from_solution(g_mod, slots, false, sol);
        if (determinant(f, budget).is_zero()) continue;
        if (determinant(g, budget).is_zero()) continue;
        return DualityWitness<K>{std::move(f), std::move(g)};
    }
    return std::nullopt;
}

/// Symmetric replacement with the same minor ideals: beta = ((f + g^t)/2).alpha.
/// The averaging factor is a degree-zero endomorphism with constant nonzero
/// determinant, hence a unit over the ring, so every minor ideal survives.
/// When only the difference is invertible the result would be skew, which the
/// underlying duality theory rules out for an irreducible determinant; that
/// outcome is reported as an error rather than silently accepted.
template <class K>
FormMatrix<K> symmetrize(const FormMatrix<K>& alpha, const DualityWitness<K>& witness,
                         const Budget& budget = Budget::defaults()) {
    using namespace projection_detail;
    const FieldSpec& field = alpha.ring()->field();
    if (field.kind == FieldSpec::Kind::prime && field.p == 2)
        throw CheckError("characteristic 2 is unsupported for symmetrization");
    if (!alpha.has_symmetric_layout())
        throw CheckError("symmetrization needs the -5 dual layout");
    if (alpha.is_symmetric()) return alpha;

    FormMatrix<K> at = alpha.transpose();
    if (!(witness.f.compose(alpha) == at.compose(witness.g)))
        throw CheckError("the duality pair does not intertwine the matrix");

    FormMatrix<K> gt = witness.g.transpose();
    K half = FieldOps<K>::from_int(2, field).inv();
    FormMatrix<K> avg = (witness.f + gt).times_scalar(half);
    if (!determinant(avg, budget).is_zero()) {
        FormMatrix<K> beta = avg.compose(alpha);
        if (!beta.is_symmetric())
            throw CheckError("symmetrized output is not symmetric; the witness is inconsistent");
        return beta;
    }
    FormMatrix<K> diff = (witness.f - gt).times_scalar(half);
    if (!determinant(diff, budget).is_zero())
        throw CheckError("symmetric average is singular and the skew average is invertible; "
                         "the matrix presents a skew class");
    throw CheckError("no invertible combination of the duality pair");
}

template <class K>
FormMatrix<K> symmetrize(const FormMatrix<K>& alpha, Rng& rng,
                         const Budget& budget = Budget::defaults(), int attempts = 8) {
    auto witness = find_duality_witness(alpha, rng, budget, attempts);
    if (!witness) throw CheckError("no lift found");
    return symmetrize(alpha, *witness, budget);
}

/// Graded cokernel dimensions in degrees lo..hi. Free data presents its own
/// cokernel; block data is first resolved to a cover presentation.
template <class K>
std::vector<long long> plurigenus_dimensions(const ProjectionDatum<K>& datum, long lo = 2,
                                             long hi = 6) {
    FormMatrix<K> pres =
        datum.is_block() ? monad_to_presentation(datum.blocks()) : datum.matrix();
    std::vector<long long> out;
    for (long m = lo; m <= hi; ++m) out.push_back(presentation_coker_dim(pres, m));
    return out;
}

} // namespace canproj
