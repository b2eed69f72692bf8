#pragma once

// Numerical classification toolkit for irregular canonical surfaces: the
// inequality suite with equality annotations, the rank-3 bundle enumeration
// over an elliptic base, moduli strata with dimensions, Chow arithmetic on
// the associated projective bundle, theta-characteristic fixed-point counts,
// and the invariant records of the three special families.
//
// Everything here is exact integer or rational arithmetic; no tolerance
// appears anywhere. Checks that lack their input data report not_applicable
// rather than guessing.

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "canproj/errors.hpp"

namespace canproj {

// ---------------------------------------------------------------------------
// invariant records

enum class AlbaneseImage { surface, curve };

/// Numerical invariants of a minimal surface of general type, plus optional
/// fibration data. ksq may be left unknown; checks that need it then report
/// bounds instead of verdicts. base_genus/fiber_genus describe a fibration
/// over a curve when present.
struct InvariantRecord {
    long pg = 0;
    long q = 0;
    std::optional<long> ksq;
    std::optional<AlbaneseImage> albanese;
    std::optional<long> base_genus;
    std::optional<long> fiber_genus;
    std::optional<long> canonical_degree;

    long chi() const { return 1 - q + pg; }

    /// Marks the Albanese image as a curve; its genus equals q.
    InvariantRecord& with_albanese_pencil() {
        albanese = AlbaneseImage::curve;
        base_genus = q;
        return *this;
    }
};

enum class Verdict { pass, fail, not_applicable };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "not applicable";
    }
}

struct InequalityCheck {
    std::string name;
    std::string instance;  // the bound with the record's numbers substituted
    Verdict verdict = Verdict::not_applicable;
    std::vector<std::string> consequences;  // forced structure, only as quoted claims
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (c.verdict == Verdict::fail) return false;
        return true;
    }
    const InequalityCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// exact slope

/// Reduced fraction with positive denominator.
struct Slope {
    long num = 0;
    long den = 1;

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
    bool operator==(const Slope& o) const { return num == o.num && den == o.den; }
};

/// Slope of a relatively minimal fibration over a genus-b curve with fibres
/// of genus g. The denominator chi - (b-1)(g-1) must be positive; it vanishes
/// exactly on the etale-bundle boundary, where the slope is undefined.
inline Slope slope(long ksq, long chi, long b, long g) {
    long corr = (b - 1) * (g - 1);
    long num = ksq - 8 * corr;
    long den = chi - corr;
    if (den <= 0)
        throw InputError("the fibration sits on the etale-bundle boundary; the slope is undefined");
    long gg = std::gcd(std::abs(num), den);
    if (gg == 0) gg = 1;
    long sign = num < 0 ? -1 : 1;
    return Slope{sign * (std::abs(num) / gg), den / gg};
}

// ---------------------------------------------------------------------------
// pencil enumeration

/// One feasible fibre genus for a pencil over the Albanese image of genus
/// q >= 2, with the exact K^2 window it allows. etale marks the boundary
/// chi = (q-1)(g-1), where K^2 is pinned to 8(q-1)(g-1).
struct PencilSolution {
    long g = 0;
    long ksq_lo = 0;
    long ksq_hi = 0;
    bool etale = false;
};

/// Feasible (g, K^2) table for surfaces whose Albanese image is a curve of
/// genus q >= 2. Lower bounds: the pencil inequality 2pg + 4q - 4 and the
/// fibred bound 8(q-1)(g-1); upper bounds: 9chi and the slope consequence
/// 12chi - 4(q-1)(g-1). On the etale boundary the window collapses to the
/// bundle value. Empty windows are dropped.
inline std::vector<PencilSolution> albanese_pencil_solutions(long pg, long q) {
    if (q < 2) throw InputError("the pencil enumeration needs an Albanese image of genus at least 2");
    long chi = 1 - q + pg;
    std::vector<PencilSolution> out;
    for (long g = 2; (q - 1) * (g - 1) <= chi; ++g) {
        long corr = (q - 1) * (g - 1);
        PencilSolution s;
        s.g = g;
        if (corr == chi) {
            s.etale = true;
            s.ksq_lo = s.ksq_hi = 8 * corr;
            long lower = 2 * pg + 4 * q - 4;
            if (s.ksq_lo < lower || s.ksq_lo > 9 * chi) continue;
        } else {
            s.ksq_lo = std::max(2 * pg + 4 * q - 4, 8 * corr);
            s.ksq_hi = std::min(9 * chi, 12 * chi - 4 * corr);
            if (s.ksq_lo > s.ksq_hi) continue;
        }
        out.push_back(s);
    }
    return out;
}

namespace geography_detail {

inline std::string num(long v) { return std::to_string(v); }

inline InequalityCheck entry(std::string name, std::string instance, Verdict v) {
    InequalityCheck c;
    c.name = std::move(name);
    c.instance = std::move(instance);
    c.verdict = v;
    return c;
}

}  // namespace geography_detail

/// Evaluates the full inequality suite on a record. Every check is always
/// present in the report, in a fixed order; missing data yields
/// not_applicable. Equality cases carry the forced structure as consequence
/// strings, never beyond the quoted claims.
inline InequalityReport inequality_report(const InvariantRecord& rec) {
    using geography_detail::entry;
    using geography_detail::num;
    InequalityReport rep;
    long chi = rec.chi();
    bool pencil = rec.albanese && *rec.albanese == AlbaneseImage::curve;
    bool fibred = rec.base_genus && rec.fiber_genus;

    {
        auto c = entry("castelnuovo", "chi = " + num(chi) + " >= 1",
                       chi >= 1 ? Verdict::pass : Verdict::fail);
        if (c.verdict == Verdict::pass && rec.pg == 4) c.consequences.push_back("q <= 4");
        rep.checks.push_back(std::move(c));
    }

    {
        long lower = 2 * rec.q - 4;
        auto c = entry("castelnuovo_beauville",
                       "p_g = " + num(rec.pg) + " >= 2q - 4 = " + num(lower),
                       rec.pg >= lower ? Verdict::pass : Verdict::fail);
        if (rec.pg == lower) {
            c.consequences.push_back(
                "S is a product of a curve of genus 2 with a curve of genus >= 2");
            if (rec.pg == 4 && rec.q == 4) {
                c.consequences.push_back("the product of two curves of genus 2");
                c.consequences.push_back(
                    "the canonical map is a (Z/2)^2-Galois covering of a smooth quadric");
            }
        }
        rep.checks.push_back(std::move(c));
    }

    if (rec.q >= 1 && rec.ksq) {
        rep.checks.push_back(entry("debarre",
                                   "K^2 = " + num(*rec.ksq) + " >= 2p_g = " + num(2 * rec.pg),
                                   *rec.ksq >= 2 * rec.pg ? Verdict::pass : Verdict::fail));
    } else {
        rep.checks.push_back(entry("debarre", "needs q >= 1 and K^2", Verdict::not_applicable));
    }

    if (rec.ksq) {
        long lower = 2 * rec.pg - 4;
        rep.checks.push_back(entry("noether",
                                   "K^2 = " + num(*rec.ksq) + " >= 2p_g - 4 = " + num(lower),
                                   *rec.ksq >= lower ? Verdict::pass : Verdict::fail));
    } else {
        rep.checks.push_back(entry("noether", "needs K^2", Verdict::not_applicable));
    }

    if (rec.ksq) {
        rep.checks.push_back(entry("bogomolov_miyaoka_yau",
                                   "K^2 = " + num(*rec.ksq) + " <= 9chi = " + num(9 * chi),
                                   *rec.ksq <= 9 * chi ? Verdict::pass : Verdict::fail));
    } else {
        rep.checks.push_back(entry("bogomolov_miyaoka_yau", "needs K^2", Verdict::not_applicable));
    }

    {
        InequalityCheck c;
        c.name = "albanese_pencil";
        if (pencil && rec.q >= 1) {
            long lower = 2 * rec.pg + 4 * rec.q - 4;
            c.instance = "K^2 >= 2p_g + 4q - 4 = " + num(lower);
            if (rec.ksq)
                c.verdict = *rec.ksq >= lower ? Verdict::pass : Verdict::fail;
            else {
                c.verdict = Verdict::not_applicable;
                c.consequences.push_back("K^2 >= " + num(lower));
            }
            if (rec.q >= 2) {
                auto sols = albanese_pencil_solutions(rec.pg, rec.q);
                if (!sols.empty()) {
                    long gmax = 0;
                    for (const auto& s : sols) gmax = std::max(gmax, s.g);
                    c.consequences.push_back("g <= " + num(gmax));
                    if (sols.size() == 1 && sols[0].ksq_lo == sols[0].ksq_hi) {
                        c.consequences.push_back("K^2 = " + num(sols[0].ksq_lo));
                        c.consequences.push_back("g = " + num(sols[0].g));
                        if (sols[0].etale)
                            c.consequences.push_back(
                                "the Albanese map is an etale bundle with fibre of genus " +
                                num(sols[0].g));
                    }
                }
            }
        } else {
            c.instance = "needs an Albanese image which is a curve";
            c.verdict = Verdict::not_applicable;
        }
        rep.checks.push_back(std::move(c));
    }

    if (rec.canonical_degree && *rec.canonical_degree == 2 && rec.q >= 1 && rec.q <= 3 &&
        rec.ksq) {
        long lower = 2 * rec.pg + rec.q - 1;
        rep.checks.push_back(entry("canonical_degree_two",
                                   "K^2 = " + num(*rec.ksq) + " >= 2p_g + q - 1 = " + num(lower),
                                   *rec.ksq >= lower ? Verdict::pass : Verdict::fail));
    } else {
        rep.checks.push_back(entry("canonical_degree_two",
                                   "needs canonical degree 2, 1 <= q <= 3 and K^2",
                                   Verdict::not_applicable));
    }

    if (fibred && *rec.fiber_genus >= 2 && rec.ksq) {
        long corr = (*rec.base_genus - 1) * (*rec.fiber_genus - 1);
        auto c = entry("arakelov",
                       "K^2 = " + num(*rec.ksq) + " >= 8(b-1)(g-1) = " + num(8 * corr),
                       *rec.ksq >= 8 * corr ? Verdict::pass : Verdict::fail);
        if (*rec.ksq == 8 * corr) c.consequences.push_back("the fibration has constant moduli");
        rep.checks.push_back(std::move(c));
    } else {
        rep.checks.push_back(
            entry("arakelov", "needs a fibration with b, g and K^2", Verdict::not_applicable));
    }

    if (fibred && *rec.fiber_genus >= 2) {
        long corr = (*rec.base_genus - 1) * (*rec.fiber_genus - 1);
        auto c = entry("beauville_fibration",
                       "chi = " + num(chi) + " >= (b-1)(g-1) = " + num(corr),
                       chi >= corr ? Verdict::pass : Verdict::fail);
        if (chi == corr) {
            c.consequences.push_back("the fibration is an etale bundle");
            long forced = 8 * corr;
            c.consequences.push_back("K^2 = " + num(forced));
            if (rec.ksq && *rec.ksq != forced) c.verdict = Verdict::fail;
        }
        rep.checks.push_back(std::move(c));
    } else {
        rep.checks.push_back(
            entry("beauville_fibration", "needs a fibration with b, g", Verdict::not_applicable));
    }

    {
        InequalityCheck c;
        c.name = "xiao_konno";
        c.verdict = Verdict::not_applicable;
        c.instance = "needs a fibration off the etale boundary and K^2";
        if (fibred && *rec.fiber_genus >= 2 && rec.ksq) {
            long b = *rec.base_genus, g = *rec.fiber_genus;
            long corr = (b - 1) * (g - 1);
            if (chi - corr > 0) {
                Slope lam = slope(*rec.ksq, chi, b, g);
                c.instance = "4(g-1)/g <= lambda(f) = " + lam.to_string() + " <= 12";
                bool lower = g * lam.num >= 4 * (g - 1) * lam.den;
                bool upper = lam.num <= 12 * lam.den;
                c.verdict = lower && upper ? Verdict::pass : Verdict::fail;
                if (lower && g * lam.num == 4 * (g - 1) * lam.den)
                    c.consequences.push_back("all the fibres are hyperelliptic");
            } else {
                c.instance = "lambda(f) undefined on the etale-bundle boundary";
            }
        } else if (rec.base_genus && *rec.base_genus == 1 && rec.ksq && !rec.fiber_genus) {
            // over an elliptic base the slope is K^2/chi for every fibre genus,
            // so the lower bound caps g even before g is known
            Slope lam = slope(*rec.ksq, chi, 1, 2);
            c.instance = "lambda(f) = " + lam.to_string() + " for every fibre genus";
            c.consequences.push_back("lambda(f) = " + lam.to_string());
            if (4 * lam.den > lam.num) {
                long cap = (4 * lam.den) / (4 * lam.den - lam.num);
                c.consequences.push_back("g <= " + std::to_string(cap));
            }
        }
        rep.checks.push_back(std::move(c));
    }

    return rep;
}

// ---------------------------------------------------------------------------
// bundle types

/// A decomposition type: the (rank, degree) multiset of the indecomposable
/// summands, listed by descending slope degree/rank.
using BundleType = std::vector<std::pair<long, long>>;

namespace geography_detail {

inline bool slope_before(const std::pair<long, long>& a, const std::pair<long, long>& b) {
    long lhs = a.second * b.first, rhs = b.second * a.first;
    if (lhs != rhs) return lhs > rhs;
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
}

inline void collect_types(long rank_left, long deg_left, std::pair<long, long> cap,
                          BundleType& acc, std::vector<BundleType>& out) {
    if (rank_left == 0) {
        if (deg_left == 0) out.push_back(acc);
        return;
    }
    for (long r = std::min(rank_left, cap.first); r >= 1; --r)
        for (long d = (r == cap.first ? std::min(deg_left, cap.second) : deg_left); d >= r; --d) {
            acc.push_back({r, d});
            collect_types(rank_left - r, deg_left - d, {r, d}, acc, out);
            acc.pop_back();
        }
}

}  // namespace geography_detail

/// All (rank, degree) multisets with total rank 3, total degree 4, every
/// summand of positive rank and of degree at least its rank. The degree
/// bound comes from sections of indecomposable bundles on an elliptic
/// curve generically generated by global sections.
inline std::vector<BundleType> enumerate_bundle_types() {
    std::vector<BundleType> out;
    BundleType acc;
    geography_detail::collect_types(3, 4, {3, 4}, acc, out);
    // canonical comparison key: summands by descending (rank, degree)
    std::sort(out.begin(), out.end(), [](const BundleType& a, const BundleType& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a > b;
    });
    for (auto& t : out) std::sort(t.begin(), t.end(), geography_detail::slope_before);
    return out;
}

// ---------------------------------------------------------------------------
// moduli strata

enum class StratumTag {
    i,
    ii0,
    ii1,
    iii,
    ivI,
    ivII,
    ivIII,
    ivI_quarter,
    ivI_half,
    ivI_third,
    ivI1,  // normalization tag only; the table itself carries ten strata
};

inline std::string to_string(StratumTag t) {
    switch (t) {
    case StratumTag::i: return "i";
    case StratumTag::ii0: return "ii0";
    case StratumTag::ii1: return "ii1";
    case StratumTag::iii: return "iii";
    case StratumTag::ivI: return "ivI";
    case StratumTag::ivII: return "ivII";
    case StratumTag::ivIII: return "ivIII";
    case StratumTag::ivI_quarter: return "ivI_quarter";
    case StratumTag::ivI_half: return "ivI_half";
    case StratumTag::ivI_third: return "ivI_third";
    default: return "ivI1";
    }
}

struct StratumDescriptor {
    StratumTag tag;
    long dimension;
};

/// The ten locally closed strata of the K^2 = 12, q = 1 moduli space with
/// their dimensions. Exactly one stratum has dimension 20; the moduli space
/// is its closure.
inline std::vector<StratumDescriptor> strata_table() {
    return {
        {StratumTag::i, 20},           {StratumTag::ii0, 19},
        {StratumTag::ii1, 19},         {StratumTag::iii, 18},
        {StratumTag::ivI, 18},         {StratumTag::ivII, 19},
        {StratumTag::ivIII, 19},       {StratumTag::ivI_quarter, 18},
        {StratumTag::ivI_half, 19},    {StratumTag::ivI_third, 18},
    };
}

/// Obstruction-corrected lower bound for the moduli dimension:
/// -chi(T_S) + 4 = 10 chi - 2 K^2 + 4.
inline long moduli_lower_bound(long chi, long ksq) { return 10 * chi - 2 * ksq + 4; }

// ---------------------------------------------------------------------------
// Chow arithmetic

/// Integer combination of monomials in the hyperplane class D and the fibre
/// class F on the projectivization of a rank-3 bundle over an elliptic
/// curve. F^2 = 0 is applied eagerly, so stored monomials have F-exponent
/// at most 1.
class ChowExpression {
public:
    ChowExpression() = default;

    static ChowExpression D() { return monomial(1, 0, 1); }
    static ChowExpression F() { return monomial(0, 1, 1); }
    static ChowExpression monomial(int dpow, int fpow, long c) {
        ChowExpression e;
        if (fpow <= 1 && c != 0) e.coeff_[{dpow, fpow}] = c;
        return e;
    }

    ChowExpression operator+(const ChowExpression& o) const {
        ChowExpression r = *this;
        for (const auto& [m, c] : o.coeff_) {
            long v = (r.coeff_[m] += c);
            if (v == 0) r.coeff_.erase(m);
        }
        return r;
    }
    ChowExpression operator-(const ChowExpression& o) const { return *this + o * -1; }
    ChowExpression operator*(long s) const {
        ChowExpression r;
        if (s == 0) return r;
        for (const auto& [m, c] : coeff_) r.coeff_[m] = c * s;
        return r;
    }
    ChowExpression operator*(const ChowExpression& o) const {
        ChowExpression r;
        for (const auto& [ma, ca] : coeff_)
            for (const auto& [mb, cb] : o.coeff_) {
                int fpow = ma.second + mb.second;
                if (fpow > 1) continue;  // F^2 = 0
                auto key = std::make_pair(ma.first + mb.first, fpow);
                long v = (r.coeff_[key] += ca * cb);
                if (v == 0) r.coeff_.erase(key);
            }
        return r;
    }
    ChowExpression pow(int k) const {
        ChowExpression r = monomial(0, 0, 1);
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    bool is_zero() const { return coeff_.empty(); }
    const std::map<std::pair<int, int>, long>& terms() const { return coeff_; }

private:
    std::map<std::pair<int, int>, long> coeff_;
};

/// Degree of a 3-dimensional class: D^3 = e, D^2 F = 1, everything with
/// F-exponent above one already died against F^2 = 0. Mixed or off-degree
/// expressions are rejected.
inline long chow_eval(const ChowExpression& expr, long e) {
    long total = 0;
    for (const auto& [m, c] : expr.terms()) {
        if (m.first + m.second != 3)
            throw InputError("chow evaluation needs a class of total degree 3");
        if (m.first == 3)
            total += c * e;
        else if (m.first == 2 && m.second == 1)
            total += c;
    }
    return total;
}

// ---------------------------------------------------------------------------
// direct image degrees

inline long long geography_binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// deg of the i-th pluricanonical direct image on the Albanese base:
/// chi + i(i-1)/2 K^2.
inline long direct_image_degrees(long chi, long ksq, long i) {
    if (i < 1) throw InputError("direct images are indexed from 1");
    return chi + i * (i - 1) / 2 * ksq;
}

/// deg Sym^k of a rank-r degree-d bundle on an elliptic curve.
inline long sym_power_degree(long r, long d, long k) {
    if (r < 1) throw InputError("sym_power_degree needs positive rank");
    if (k < 0) throw InputError("sym_power_degree needs a nonnegative power");
    return static_cast<long>(d * geography_binomial(k + r - 1, r));
}

/// The symmetric square of the canonical direct image fills the bicanonical
/// direct image exactly when no fibre is hyperelliptic; in degrees this is
/// deg Sym^2 = 16 against chi + K^2.
inline bool no_hyperelliptic_fibre(long chi, long ksq) {
    return sym_power_degree(3, 4, 2) == direct_image_degrees(chi, ksq, 2);
}

// ---------------------------------------------------------------------------
// fixed points

struct FixedPointCount {
    long card_n = 0;
    long total = 0;
};

/// Number of pairs (x, y) in ((Z/2)^3)^2 with <x, y> = 1 and the stated
/// value on the first coordinate of x; -1 lifts the constraint. The
/// unconstrained count 28 is the number of odd theta-characteristics in
/// genus 3.
inline long odd_pair_count(int x1 = -1) {
    long count = 0;
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) {
            if (std::popcount(static_cast<unsigned>(x & y)) % 2 != 1) continue;
            if (x1 >= 0 && ((x >> 2) & 1) != x1) continue;
            ++count;
        }
    return count;
}

/// The isolated fixed points of the special involution: each of the 16
/// elements of N = { <x, y> = 1, x_1 = 1 } contributes two.
inline FixedPointCount fixed_point_count() {
    long n = odd_pair_count(1);
    return {n, 2 * n};
}

// ---------------------------------------------------------------------------
// special families

struct SpecialFamily {
    enum class Kind { polarization, z2z2_cover, sextic_quotient };
    Kind kind = Kind::polarization;
    long d1 = 0, d2 = 0, d3 = 0;  // polarization type on an abelian threefold
    long theta_sq = 0;            // theta self-intersection on an abelian surface

    static SpecialFamily polarization(long d1, long d2, long d3) {
        SpecialFamily f;
        f.kind = Kind::polarization;
        f.d1 = d1;
        f.d2 = d2;
        f.d3 = d3;
        return f;
    }
    static SpecialFamily z2z2_cover(long theta_sq) {
        SpecialFamily f;
        f.kind = Kind::z2z2_cover;
        f.theta_sq = theta_sq;
        return f;
    }
    static SpecialFamily sextic_quotient() {
        SpecialFamily f;
        f.kind = Kind::sextic_quotient;
        return f;
    }
};

struct FamilyInvariants {
    InvariantRecord record;
    std::optional<long> kuranishi_dimension;
};

/// Invariants of the three constructed families: a polarization surface of
/// type (d1,d2,d3) in an abelian threefold, the (Z/2)^2 cover of a
/// principally polarized abelian surface, and the quotient of the special
/// sextic datum by its covering involution.
inline FamilyInvariants special_family_invariants(const SpecialFamily& fam) {
    FamilyInvariants out;
    switch (fam.kind) {
    case SpecialFamily::Kind::polarization: {
        if (fam.d1 < 1 || fam.d2 < 1 || fam.d3 < 1)
            throw InputError("polarization type must be positive");
        long pfaffian = fam.d1 * fam.d2 * fam.d3;
        out.record.pg = pfaffian + 2;
        out.record.q = 3;
        out.record.ksq = 6 * pfaffian;
        // 6 moduli of the abelian threefold plus the linear system
        out.kuranishi_dimension = 6 + (pfaffian - 1);
        return out;
    }
    case SpecialFamily::Kind::z2z2_cover: {
        if (fam.theta_sq < 2 || fam.theta_sq % 2 != 0)
            throw InputError("theta self-intersection must be a positive even number");
        out.record.pg = 1 + 3 * (fam.theta_sq / 2);
        out.record.q = 2;
        out.record.ksq = 9 * fam.theta_sq;
        return out;
    }
    default: {
        out.record.pg = 4;
        out.record.q = 0;
        out.record.ksq = 6;
        return out;
    }
    }
}

}  // namespace canproj
