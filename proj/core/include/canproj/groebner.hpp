#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "canproj/polynomial.hpp"

namespace canproj {

/// Caps on Groebner-type computations. Exceeding a cap raises ResourceError;
/// never a silently truncated answer.
struct Budget {
    std::size_t max_basis = 20000;        // basis elements
    int max_degree = 100;                 // degree of any handled term or lcm
    std::uint64_t max_pairs = 2000000;    // S-pairs processed per basis computation
    std::uint64_t max_minors = 500000;    // minors enumerated per call

    static Budget defaults() { return from_env(); }

    /// Environment overrides: CANPROJ_MAX_BASIS, CANPROJ_MAX_DEGREE,
    /// CANPROJ_MAX_PAIRS, CANPROJ_MAX_MINORS.
    static Budget from_env() {
        Budget b;
        read_env("CANPROJ_MAX_BASIS", b.max_basis);
        read_env("CANPROJ_MAX_DEGREE", b.max_degree);
        read_env("CANPROJ_MAX_PAIRS", b.max_pairs);
        read_env("CANPROJ_MAX_MINORS", b.max_minors);
        return b;
    }

private:
    template <class T> static void read_env(const char* name, T& slot) {
        const char* v = std::getenv(name);
        if (!v || !*v) return;
        char* end = nullptr;
        long long parsed = std::strtoll(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) slot = static_cast<T>(parsed);
    }
};

template <class K> struct GroebnerBasis {
    MonomialOrder order;
    std::vector<Poly<K>> elements; // reduced, monic, sorted by leading monomial ascending
};

namespace gb_detail {

/// a[start..] - c * x^m * b, sorted under ord. The shared leading term cancels.
template <class K>
std::vector<Term<K>> sub_multiple(const std::vector<Term<K>>& a, std::size_t start, const K& c,
                                  const Monomial& m, const std::vector<Term<K>>& b,
                                  const MonomialOrder& ord) {
    std::vector<Term<K>> out;
    out.reserve(a.size() - start + b.size());
    std::size_t i = start, j = 0;
    while (i < a.size() && j < b.size()) {
        Monomial bm = b[j].m * m;
        int cmp = ord.compare(a[i].m, bm);
        if (cmp > 0) out.push_back(a[i++]);
        else if (cmp < 0) {
            out.push_back({-(c * b[j].c), bm});
            ++j;
        } else {
            K v = a[i].c - c * b[j].c;
            if (!v.is_zero()) out.push_back({std::move(v), a[i].m});
            ++i; ++j;
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) { out.push_back({-(c * b[j].c), b[j].m * m}); ++j; }
    return out;
}

/// Integer-content normalization over the rationals keeps coefficients small
/// during basis construction; other fields pass through.
inline Poly<QQ> strip_content(const Poly<QQ>& p) {
    if (p.is_zero()) return p;
    mpz_class den = 1, num = 0;
    for (const auto& t : p.terms()) den = lcm(den, t.c.den());
    for (const auto& t : p.terms()) num = gcd(num, mpz_class(t.c.num() * (den / t.c.den())));
    QQ scale(mpq_class(den) / mpq_class(num));
    return p.times_scalar(scale);
}
inline Poly<Fp> strip_content(const Poly<Fp>& p) { return p; }

/// Full reduction of a sorted working list against sorted reducers.
/// Every reducer is nonzero and sorted descending under ord.
template <class K>
std::vector<Term<K>> nf_terms(std::vector<Term<K>> work,
                              const std::vector<const std::vector<Term<K>>*>& reducers,
                              const MonomialOrder& ord, const Budget& budget) {
    std::vector<Term<K>> head;
    std::size_t start = 0;
    std::uint64_t steps = 0;
    const std::uint64_t step_cap = budget.max_pairs * 64 + 1000000;
    while (start < work.size()) {
        const Term<K>& lt = work[start];
        if (lt.m.total_degree() > budget.max_degree)
            throw ResourceError("reduction exceeded degree budget (" +
                                std::to_string(budget.max_degree) + ")");
        bool reduced = false;
        for (const auto* r : reducers) {
            const Monomial& lm = r->front().m;
            if (!lm.divides(lt.m)) continue;
            K c = lt.c / r->front().c;
            work = sub_multiple(work, start, c, lt.m.div(lm), *r, ord);
            start = 0;
            reduced = true;
            break;
        }
        if (!reduced) head.push_back(work[start++]);
        if (++steps > step_cap) throw ResourceError("reduction exceeded step budget");
    }
    return head;
}

} // namespace gb_detail

/// Full normal form of f against basis elements under ord: no term of the
/// result is divisible by any basis leading monomial.
template <class K>
Poly<K> normal_form(const Poly<K>& f, const std::vector<Poly<K>>& basis, const MonomialOrder& ord,
                    const Budget& budget = Budget::defaults()) {
    if (f.is_zero()) return f;
    std::vector<std::vector<Term<K>>> sorted;
    sorted.reserve(basis.size());
    for (const auto& g : basis)
        if (!g.is_zero()) sorted.push_back(g.sorted_terms(ord));
    std::vector<const std::vector<Term<K>>*> reds;
    reds.reserve(sorted.size());
    for (const auto& s : sorted) reds.push_back(&s);
    auto head = gb_detail::nf_terms(f.sorted_terms(ord), reds, ord, budget);
    return Poly<K>::from_terms(f.ring(), std::move(head));
}

template <class K>
Poly<K> normal_form(const Poly<K>& f, const GroebnerBasis<K>& gb,
                    const Budget& budget = Budget::defaults()) {
    return normal_form(f, gb.elements, gb.order, budget);
}

/// Buchberger with the Gebauer-Moller pair update (chain and coprime-lead
/// criteria), normal pair selection, reduced monic output.
template <class K>
GroebnerBasis<K> buchberger(const RingPtr& ring, const std::vector<Poly<K>>& generators,
                            const MonomialOrder& ord, const Budget& budget = Budget::defaults()) {
    struct Elem {
        Poly<K> p;
        std::vector<Term<K>> sorted; // descending under ord
        Monomial lm;
        K lc;
    };
    struct Pair {
        std::size_t i, j;
        Monomial lcm;
    };
    std::vector<Elem> g;
    std::vector<Pair> pairs;

    auto make_elem = [&](Poly<K> p) {
        Elem e;
        e.p = gb_detail::strip_content(p);
        e.sorted = e.p.sorted_terms(ord);
        e.lm = e.sorted.front().m;
        e.lc = e.sorted.front().c;
        return e;
    };

    // Gebauer-Moller update of the pair queue for a newly appended element.
    auto update_pairs = [&](std::size_t t) {
        const Monomial& lmt = g[t].lm;
        struct Cand { std::size_t i; Monomial l; bool coprime; };
        std::vector<Cand> c, d;
        for (std::size_t i = 0; i < t; ++i)
            c.push_back({i, g[i].lm.lcm(lmt), g[i].lm.coprime(lmt)});
        for (std::size_t k = 0; k < c.size(); ++k) {
            bool keep = c[k].coprime;
            if (!keep) {
                bool blocked = false;
                for (std::size_t k2 = k + 1; k2 < c.size() && !blocked; ++k2)
                    if (c[k2].l.divides(c[k].l)) blocked = true;
                for (const auto& dd : d)
                    if (dd.l.divides(c[k].l)) { blocked = true; break; }
                keep = !blocked;
            }
            if (keep) d.push_back(c[k]);
        }
        std::vector<Pair> kept;
        kept.reserve(pairs.size() + d.size());
        for (const auto& pr : pairs) {
            // old pair survives unless the new lead strictly refines it
            if (!lmt.divides(pr.lcm) || g[pr.i].lm.lcm(lmt) == pr.lcm ||
                g[pr.j].lm.lcm(lmt) == pr.lcm)
                kept.push_back(pr);
        }
        for (const auto& dd : d)
            if (!dd.coprime) kept.push_back({dd.i, t, dd.l});
        pairs = std::move(kept);
    };

    for (const auto& p : generators)
        if (!p.is_zero()) {
            g.push_back(make_elem(p));
            update_pairs(g.size() - 1);
        }

    auto reducer_ptrs = [&]() {
        std::vector<const std::vector<Term<K>>*> reds;
        reds.reserve(g.size());
        for (const auto& e : g) reds.push_back(&e.sorted);
        return reds;
    };

    std::uint64_t processed = 0;
    while (!pairs.empty()) {
        // normal selection: smallest lcm under the active order
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs.size(); ++k)
            if (ord.less(pairs[k].lcm, pairs[best].lcm)) best = k;
        Pair pr = pairs[best];
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
        if (++processed > budget.max_pairs)
            throw ResourceError("basis computation exceeded pair budget (" +
                                std::to_string(budget.max_pairs) + ")");
        if (pr.lcm.total_degree() > budget.max_degree)
            throw ResourceError("basis computation exceeded degree budget (" +
                                std::to_string(budget.max_degree) + ")");
        const Elem& a = g[pr.i];
        const Elem& b = g[pr.j];
        Poly<K> s = a.p.times_term(a.lc.inv(), pr.lcm.div(a.lm)) -
                    b.p.times_term(b.lc.inv(), pr.lcm.div(b.lm));
        if (s.is_zero()) continue;
        auto head = gb_detail::nf_terms(s.sorted_terms(ord), reducer_ptrs(), ord, budget);
        if (head.empty()) continue;
        g.push_back(make_elem(Poly<K>::from_terms(ring, std::move(head))));
        if (g.size() > budget.max_basis)
            throw ResourceError("basis computation exceeded size budget (" +
                                std::to_string(budget.max_basis) + ")");
        update_pairs(g.size() - 1);
    }

    // minimalize: drop elements whose lead is divisible by another kept lead
    std::vector<std::size_t> order_idx(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) order_idx[i] = i;
    std::sort(order_idx.begin(), order_idx.end(),
              [&](std::size_t x, std::size_t y) { return ord.less(g[x].lm, g[y].lm); });
    std::vector<std::size_t> kept;
    for (std::size_t idx : order_idx) {
        bool dominated = false;
        for (std::size_t k : kept)
            if (g[k].lm.divides(g[idx].lm)) { dominated = true; break; }
        if (!dominated) kept.push_back(idx);
    }
    // tail-reduce each survivor against the others, monic output
    GroebnerBasis<K> out;
    out.order = ord;
    for (std::size_t pass = 0; pass < kept.size(); ++pass) {
        std::vector<const std::vector<Term<K>>*> others;
        others.reserve(kept.size() - 1);
        for (std::size_t k = 0; k < kept.size(); ++k)
            if (k != pass) others.push_back(&g[kept[k]].sorted);
        auto head = gb_detail::nf_terms(g[kept[pass]].sorted, others, ord, budget);
        out.elements.push_back(Poly<K>::from_terms(ring, std::move(head)).monic(ord));
    }
    std::sort(out.elements.begin(), out.elements.end(), [&](const Poly<K>& x, const Poly<K>& y) {
        return ord.less(x.leading_term(ord).m, y.leading_term(ord).m);
    });
    return out;
}

} // namespace canproj
