#pragma once

#include <vector>

#include "canproj/ideal.hpp"

namespace canproj {

/// Dense integer polynomial in one formal variable, ascending coefficients.
struct UniPolyZ {
    std::vector<long long> c;

    static UniPolyZ zero() { return {}; }
    static UniPolyZ one() { return {{1}}; }

    bool is_zero() const {
        for (long long v : c) if (v) return false;
        return true;
    }
    int degree() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[static_cast<std::size_t>(i)]) return i;
        return -1;
    }
    long long at(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<std::size_t>(i)] : 0;
    }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    UniPolyZ operator+(const UniPolyZ& o) const {
        UniPolyZ r;
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = at(static_cast<int>(i)) + o.at(static_cast<int>(i));
        r.trim();
        return r;
    }
    UniPolyZ operator-(const UniPolyZ& o) const {
        UniPolyZ r;
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = at(static_cast<int>(i)) - o.at(static_cast<int>(i));
        r.trim();
        return r;
    }
    UniPolyZ operator*(const UniPolyZ& o) const {
        if (is_zero() || o.is_zero()) return {};
        UniPolyZ r;
        r.c.assign(c.size() + o.c.size() - 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i]) continue;
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        }
        r.trim();
        return r;
    }
    /// this * t^k
    UniPolyZ shifted(int k) const {
        UniPolyZ r;
        r.c.assign(c.size() + static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i + static_cast<std::size_t>(k)] = c[i];
        return r;
    }
    /// 1 - t^d
    static UniPolyZ one_minus_power(int d) {
        UniPolyZ r;
        r.c.assign(static_cast<std::size_t>(d) + 1, 0);
        r.c[0] = 1;
        r.c[static_cast<std::size_t>(d)] = -1;
        return r;
    }
    long long eval_at_one() const {
        long long s = 0;
        for (long long v : c) s += v;
        return s;
    }
    /// Division by (1 - t); caller guarantees vanishing at t = 1.
    UniPolyZ divide_by_one_minus_t() const {
        // (a0 + a1 t + ...)/(1-t): partial sums shifted
        UniPolyZ r;
        if (c.empty()) return r;
        r.c.assign(c.size() - 1, 0);
        long long acc = 0;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            acc += c[i];
            r.c[i] = acc;
        }
        r.trim();
        return r;
    }
    std::string to_string(const std::string& var) const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = 0; i <= degree(); ++i) {
            long long v = at(i);
            if (!v) continue;
            std::string mag = std::to_string(v < 0 ? -v : v);
            std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
            std::string coeff = (mag == "1" && !mono.empty()) ? "" : mag;
            std::string piece = coeff + (coeff.empty() || mono.empty() ? "" : "*") + mono;
            if (piece.empty()) piece = mag;
            if (s.empty()) s = (v < 0 ? "-" : "") + piece;
            else s += (v < 0 ? "-" : "+") + piece;
        }
        return s;
    }
};

/// Numerator, dimension, degree and Hilbert polynomial of a standard-graded
/// quotient; nvars records the ambient variable count for series expansion.
struct HilbertData {
    UniPolyZ numerator;       // series = numerator / (1-t)^nvars
    int dimension = -1;       // projective dimension of the vanishing locus
    long long degree = 0;     // numerator/(1-t)^codim evaluated at t = 1
    std::vector<QQ> hilbert_polynomial; // ascending coefficients in the degree variable
    int nvars = 0;

    /// Hilbert function value dim_K (A/I)_d from the series.
    long long value_at(int d) const {
        if (d < 0) return 0;
        // coefficient of t^d in numerator * sum C(nvars-1+k, nvars-1) t^k
        long long s = 0;
        for (int j = 0; j <= numerator.degree(); ++j) {
            long long nj = numerator.at(j);
            if (!nj || j > d) continue;
            s += nj * binom(nvars - 1 + d - j, nvars - 1);
        }
        return s;
    }

    static long long binom(long long n, long long k) {
        if (k < 0 || n < 0 || k > n) return 0;
        k = std::min(k, n - k);
        long long r = 1;
        for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }
};

namespace hilbert_detail {

/// Keep only monomials not divisible by another in the list.
inline std::vector<Monomial> minimal_generators(std::vector<Monomial> gens) {
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < gens.size() && !dominated; ++j) {
            if (i == j) continue;
            if (gens[j].divides(gens[i]) && !(gens[i] == gens[j] && j > i)) dominated = true;
        }
        if (!dominated) out.push_back(gens[i]);
    }
    return out;
}

/// Hilbert-series numerator of a monomial ideal by pivot splitting:
/// N(M) = N(M + (x)) + t * N(M : x).
inline UniPolyZ numerator(std::vector<Monomial> gens, int nvars, std::uint64_t& nodes,
                          const Budget& budget) {
    if (++nodes > budget.max_pairs)
        throw ResourceError("Hilbert numerator recursion exceeded budget");
    gens = minimal_generators(std::move(gens));
    for (const auto& g : gens)
        if (g.is_one()) return UniPolyZ::zero();
    if (gens.empty()) return UniPolyZ::one();
    // pivot: variable dividing the most generators
    std::vector<int> count(static_cast<std::size_t>(nvars), 0);
    for (const auto& g : gens)
        for (int v = 0; v < nvars; ++v)
            if (g.e[v]) ++count[static_cast<std::size_t>(v)];
    int pivot = 0;
    for (int v = 1; v < nvars; ++v)
        if (count[static_cast<std::size_t>(v)] > count[static_cast<std::size_t>(pivot)]) pivot = v;
    if (count[static_cast<std::size_t>(pivot)] <= 1) {
        // pairwise coprime: complete intersection of monomials
        UniPolyZ r = UniPolyZ::one();
        for (const auto& g : gens) r = r * UniPolyZ::one_minus_power(g.total_degree());
        return r;
    }
    std::vector<Monomial> plus, colon;
    Monomial x = Monomial::var(pivot, nvars);
    plus.push_back(x);
    for (const auto& g : gens) {
        if (g.e[pivot] == 0) plus.push_back(g);
        Monomial h = g;
        if (h.e[pivot]) h.e[static_cast<std::size_t>(pivot)] -= 1;
        colon.push_back(h);
    }
    return numerator(std::move(plus), nvars, nodes, budget) +
           numerator(std::move(colon), nvars, nodes, budget).shifted(1);
}

/// Polynomial in d with rational coefficients equal to C(d + a, k), ascending.
inline std::vector<QQ> binomial_in_d(long a, int k) {
    // product over i in [0,k) of (d + a - i), divided by k!
    std::vector<QQ> poly = {QQ(1)};
    for (int i = 0; i < k; ++i) {
        std::vector<QQ> next(poly.size() + 1, QQ(0));
        QQ shift(static_cast<long>(a - i));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j] * shift;
            next[j + 1] += poly[j];
        }
        poly = std::move(next);
    }
    QQ fact(1);
    for (int i = 2; i <= k; ++i) fact = fact * QQ(i);
    for (auto& c : poly) c = c / fact;
    return poly;
}

} // namespace hilbert_detail

/// Hilbert data of ring/I under the standard grading, from the lead-term
/// ideal of a Groebner basis. The result does not depend on the order;
/// grevlex is the cheap default.
template <class K>
HilbertData hilbert(const Ideal<K>& ideal, const Budget& budget = Budget::defaults(),
                    const MonomialOrder& order = MonomialOrder::grevlex()) {
    const RingSpec& ring = *ideal.ring();
    if (ring.grading().rank != 1)
        throw StructureError("Hilbert data requires the standard grading");
    for (const auto& row : ring.grading().var_degrees)
        if (row[0] != 1)
            throw StructureError("Hilbert data requires the standard grading");
    for (const auto& g : ideal.generators())
        if (!g.is_homogeneous()) throw StructureError("Hilbert data requires homogeneous generators");

    auto gb = ideal.groebner(order, budget);
    std::vector<Monomial> leads;
    for (const auto& e : gb->elements) leads.push_back(e.leading_term(order).m);

    HilbertData h;
    h.nvars = ring.nvars();
    std::uint64_t nodes = 0;
    h.numerator = hilbert_detail::numerator(std::move(leads), ring.nvars(), nodes, budget);

    if (h.numerator.is_zero()) {
        h.dimension = -1;
        h.degree = 0;
        h.hilbert_polynomial.clear();
        return h;
    }
    UniPolyZ reduced = h.numerator;
    int codim = 0;
    while (reduced.eval_at_one() == 0) {
        reduced = reduced.divide_by_one_minus_t();
        ++codim;
    }
    h.dimension = (ring.nvars() - codim) - 1;
    h.degree = reduced.eval_at_one();

    int m = ring.nvars() - codim; // series = reduced / (1-t)^m
    if (m <= 0) {
        h.hilbert_polynomial.clear(); // finite length: polynomial is zero
        return h;
    }
    std::vector<QQ> hp(static_cast<std::size_t>(m), QQ(0));
    for (int j = 0; j <= reduced.degree(); ++j) {
        long long nj = reduced.at(j);
        if (!nj) continue;
        auto piece = hilbert_detail::binomial_in_d(m - 1 - j, m - 1);
        for (std::size_t i = 0; i < piece.size(); ++i)
            hp[i] += QQ(static_cast<long>(nj)) * piece[i];
    }
    while (!hp.empty() && hp.back().is_zero()) hp.pop_back();
    h.hilbert_polynomial = std::move(hp);
    return h;
}

} // namespace canproj
