#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "canproj/groebner.hpp"

namespace canproj {

/// Ideal with generator list and per-order cache of reduced Groebner bases.
/// Copies share the cache; all mutation happens behind the cache mutex, so
/// concurrent reads from several tasks are safe.
template <class K> class Ideal {
public:
    Ideal() = default;
    Ideal(RingPtr ring, std::vector<Poly<K>> gens)
        : ring_(std::move(ring)), gens_(std::move(gens)), cache_(std::make_shared<Cache>()) {
        for (auto& g : gens_) {
            if (!g.ring() || (g.ring().get() != ring_.get() && !g.ring()->compatible(*ring_)))
                throw StructureError("ideal generator lives in a different ring");
        }
        // drop zero generators, keep everything else verbatim
        std::vector<Poly<K>> kept;
        for (auto& g : gens_)
            if (!g.is_zero()) kept.push_back(std::move(g));
        gens_ = std::move(kept);
    }

    static Ideal zero(RingPtr ring) { return Ideal(std::move(ring), {}); }
    static Ideal unit(RingPtr ring) {
        auto one = Poly<K>::from_int(ring, 1);
        return Ideal(std::move(ring), {one});
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Poly<K>>& generators() const { return gens_; }

    std::shared_ptr<const GroebnerBasis<K>> groebner(const MonomialOrder& ord,
                                                     const Budget& budget = Budget::defaults()) const {
        std::string key = ord.to_string();
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            auto it = cache_->bases.find(key);
            if (it != cache_->bases.end()) return it->second;
        }
        auto gb = std::make_shared<GroebnerBasis<K>>(buchberger(ring_, gens_, ord, budget));
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto [it, fresh] = cache_->bases.emplace(key, gb);
        (void)fresh; // a racing insert won: identical deterministic result
        return it->second;
    }

    Poly<K> normal_form_of(const Poly<K>& f, const Budget& budget = Budget::defaults()) const {
        return normal_form(f, *groebner(MonomialOrder::grevlex(), budget), budget);
    }
    bool contains(const Poly<K>& f, const Budget& budget = Budget::defaults()) const {
        return normal_form_of(f, budget).is_zero();
    }
    bool is_zero_ideal() const { return gens_.empty(); }
    bool is_unit_ideal(const Budget& budget = Budget::defaults()) const {
        if (gens_.empty()) return false;
        auto gb = groebner(MonomialOrder::grevlex(), budget);
        return gb->elements.size() == 1 && gb->elements[0].is_constant();
    }

    /// Generators replaced by the reduced grevlex basis (same ideal).
    Ideal simplified(const Budget& budget = Budget::defaults()) const {
        return Ideal(ring_, groebner(MonomialOrder::grevlex(), budget)->elements);
    }

private:
    struct Cache {
        std::mutex mu;
        std::map<std::string, std::shared_ptr<const GroebnerBasis<K>>> bases;
    };
    RingPtr ring_;
    std::vector<Poly<K>> gens_;
    std::shared_ptr<Cache> cache_;
};

template <class K> Ideal<K> ideal_sum(const Ideal<K>& a, const Ideal<K>& b) {
    std::vector<Poly<K>> gens = a.generators();
    for (const auto& g : b.generators()) gens.push_back(g);
    return Ideal<K>(a.ring(), std::move(gens));
}

template <class K> Ideal<K> ideal_with(const Ideal<K>& a, const Poly<K>& f) {
    std::vector<Poly<K>> gens = a.generators();
    gens.push_back(f);
    return Ideal<K>(a.ring(), std::move(gens));
}

/// I subset of J: every generator reduces to zero against J.
template <class K>
bool ideal_subset(const Ideal<K>& a, const Ideal<K>& b, const Budget& budget = Budget::defaults()) {
    auto gb = b.groebner(MonomialOrder::grevlex(), budget);
    for (const auto& g : a.generators())
        if (!normal_form(g, *gb, budget).is_zero()) return false;
    return true;
}

template <class K>
bool ideal_equal(const Ideal<K>& a, const Ideal<K>& b, const Budget& budget = Budget::defaults()) {
    return ideal_subset(a, b, budget) && ideal_subset(b, a, budget);
}

namespace ideal_detail {

/// Fresh helper variable name not used by the ring.
inline std::string fresh_name(const RingSpec& ring, const std::string& base) {
    std::string n = base;
    while (ring.var_index(n) >= 0) n += "_";
    return n;
}

/// Ring with the variables permuted: order[i] names the old index placed at
/// slot i. Grading rows follow their variables.
inline RingPtr permuted_ring(const RingSpec& ring, const std::vector<int>& order) {
    std::vector<std::string> names;
    Grading g;
    g.rank = ring.grading().rank;
    for (int old : order) {
        names.push_back(ring.name(old));
        g.var_degrees.push_back(ring.grading().var_degrees[static_cast<std::size_t>(old)]);
    }
    return RingSpec::make(std::move(names), ring.field(), std::move(g));
}

} // namespace ideal_detail

/// Generators of I inside the subring of the kept variables: block order with
/// the dropped variables leading, then keep the basis elements free of them.
template <class K>
Ideal<K> eliminate(const Ideal<K>& ideal, const std::set<int>& drop,
                   const Budget& budget = Budget::defaults()) {
    const RingSpec& ring = *ideal.ring();
    for (int v : drop)
        if (v < 0 || v >= ring.nvars()) throw InputError("eliminate: variable index out of range");
    if (drop.empty()) return ideal;
    std::vector<int> order, kept;
    for (int v : drop) order.push_back(v);
    for (int v = 0; v < ring.nvars(); ++v)
        if (!drop.count(v)) { order.push_back(v); kept.push_back(v); }
    if (kept.empty()) throw InputError("eliminate: cannot drop every variable");

    RingPtr big = ideal_detail::permuted_ring(ring, order);
    std::vector<int> to_big(static_cast<std::size_t>(ring.nvars()));
    for (std::size_t slot = 0; slot < order.size(); ++slot)
        to_big[static_cast<std::size_t>(order[slot])] = static_cast<int>(slot);
    std::vector<Poly<K>> mapped;
    for (const auto& g : ideal.generators()) mapped.push_back(g.map_variables(big, to_big));

    auto gb = buchberger(big, mapped, MonomialOrder::block(static_cast<int>(drop.size())), budget);

    RingPtr small = ideal_detail::permuted_ring(ring, kept);
    std::vector<int> to_small(static_cast<std::size_t>(big->nvars()), -1);
    for (std::size_t i = 0; i < kept.size(); ++i)
        to_small[drop.size() + i] = static_cast<int>(i);
    std::vector<Poly<K>> out;
    for (const auto& e : gb.elements) {
        bool pure = true;
        for (const auto& t : e.terms())
            for (std::size_t d = 0; d < drop.size() && pure; ++d)
                if (t.m.degree_in(static_cast<int>(d))) pure = false;
        if (pure) out.push_back(e.map_variables(small, to_small));
    }
    return Ideal<K>(small, std::move(out));
}

/// I intersect J via the standard one-variable trick: t*I + (1-t)*J, then
/// eliminate t.
template <class K>
Ideal<K> ideal_intersect(const Ideal<K>& a, const Ideal<K>& b,
                         const Budget& budget = Budget::defaults()) {
    const RingSpec& ring = *a.ring();
    std::vector<std::string> names = {ideal_detail::fresh_name(ring, "t")};
    for (const auto& n : ring.names()) names.push_back(n);
    RingPtr big = RingSpec::make(names, ring.field());
    std::vector<int> to_big(static_cast<std::size_t>(ring.nvars()));
    for (int i = 0; i < ring.nvars(); ++i) to_big[static_cast<std::size_t>(i)] = i + 1;

    Poly<K> t = Poly<K>::var(big, 0);
    Poly<K> one_minus_t = Poly<K>::from_int(big, 1) - t;
    std::vector<Poly<K>> gens;
    for (const auto& g : a.generators()) gens.push_back(t * g.map_variables(big, to_big));
    for (const auto& g : b.generators()) gens.push_back(one_minus_t * g.map_variables(big, to_big));

    Ideal<K> mixed(big, std::move(gens));
    Ideal<K> small = eliminate(mixed, {0}, budget);
    // transport back into the caller's ring
    std::vector<int> ident(static_cast<std::size_t>(ring.nvars()));
    for (int i = 0; i < ring.nvars(); ++i) ident[static_cast<std::size_t>(i)] = i;
    std::vector<Poly<K>> out;
    for (const auto& g : small.generators()) out.push_back(g.map_variables(a.ring(), ident));
    return Ideal<K>(a.ring(), std::move(out));
}

/// Ideal quotient I : f, through I intersect (f) divided by f.
template <class K>
Ideal<K> ideal_quotient(const Ideal<K>& ideal, const Poly<K>& f,
                        const Budget& budget = Budget::defaults()) {
    if (f.is_zero()) throw InputError("ideal quotient by zero");
    if (f.is_constant()) return ideal;
    Ideal<K> principal(ideal.ring(), {f});
    Ideal<K> meet = ideal_intersect(ideal, principal, budget);
    std::vector<Poly<K>> out;
    for (const auto& g : meet.generators()) out.push_back(g.divide_exact(f));
    return Ideal<K>(ideal.ring(), std::move(out));
}

/// Saturation I : f^inf by iterated quotient, stopping at the fixed point.
template <class K>
Ideal<K> ideal_saturation(const Ideal<K>& ideal, const Poly<K>& f,
                          const Budget& budget = Budget::defaults()) {
    if (f.is_zero()) throw InputError("saturation by zero");
    if (f.is_constant()) return ideal;
    Ideal<K> cur = ideal;
    for (std::size_t round = 0;; ++round) {
        if (round > budget.max_basis)
            throw ResourceError("saturation did not stabilize within budget");
        Ideal<K> next = ideal_quotient(cur, f, budget);
        if (ideal_subset(next, cur, budget)) return cur;
        cur = next;
    }
}

/// Saturation by one variable for a homogeneous ideal: grevlex with that
/// variable last makes the saturation a division of basis elements.
template <class K>
Ideal<K> saturate_variable(const Ideal<K>& ideal, int var,
                           const Budget& budget = Budget::defaults()) {
    const RingSpec& ring = *ideal.ring();
    if (var < 0 || var >= ring.nvars()) throw InputError("saturate_variable: index out of range");
    for (const auto& g : ideal.generators())
        if (!g.is_homogeneous())
            return ideal_saturation(ideal, Poly<K>::var(ideal.ring(), var), budget);

    std::vector<int> order;
    for (int v = 0; v < ring.nvars(); ++v)
        if (v != var) order.push_back(v);
    order.push_back(var);
    RingPtr perm = ideal_detail::permuted_ring(ring, order);
    std::vector<int> to_perm(static_cast<std::size_t>(ring.nvars()));
    for (std::size_t slot = 0; slot < order.size(); ++slot)
        to_perm[static_cast<std::size_t>(order[slot])] = static_cast<int>(slot);
    std::vector<int> back(static_cast<std::size_t>(ring.nvars()));
    for (std::size_t slot = 0; slot < order.size(); ++slot)
        back[slot] = order[slot];

    int last = ring.nvars() - 1;
    Poly<K> xv = Poly<K>::var(perm, last);
    std::vector<Poly<K>> cur;
    for (const auto& g : ideal.generators()) cur.push_back(g.map_variables(perm, to_perm));
    for (std::size_t round = 0;; ++round) {
        if (round > budget.max_basis)
            throw ResourceError("saturation did not stabilize within budget");
        auto gb = buchberger(perm, cur, MonomialOrder::grevlex(), budget);
        bool changed = false;
        std::vector<Poly<K>> next;
        for (const auto& e : gb.elements) {
            Poly<K> h = e;
            while (!h.is_zero()) {
                bool div = true;
                for (const auto& t : h.terms())
                    if (t.m.degree_in(last) == 0) { div = false; break; }
                if (!div) break;
                h = h.divide_exact(xv);
                changed = true;
            }
            next.push_back(std::move(h));
        }
        cur = std::move(next);
        if (!changed) break;
    }
    std::vector<Poly<K>> out;
    for (const auto& g : cur) out.push_back(g.map_variables(ideal.ring(), back));
    return Ideal<K>(ideal.ring(), std::move(out));
}

/// Both I : f and I : f^inf, sharing the contract that the saturation is
/// stable under one more quotient.
template <class K> struct QuotientSaturation {
    Ideal<K> quotient;
    Ideal<K> saturation;
};

template <class K>
QuotientSaturation<K> quotient_saturation(const Ideal<K>& ideal, const Poly<K>& f,
                                          const Budget& budget = Budget::defaults()) {
    return {ideal_quotient(ideal, f, budget), ideal_saturation(ideal, f, budget)};
}

} // namespace canproj
