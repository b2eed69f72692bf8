#pragma once

#include <optional>
#include <vector>

#include "canproj/groebner.hpp"

namespace canproj {

/// Degree shift of a free summand; rank-1 gradings use the first slot only.
using Twist = std::array<long, 2>;

inline Twist twist1(long a) { return Twist{a, 0}; }

inline Twist twist_add(Twist a, Twist b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Twist twist_sub(Twist a, Twist b) { return {a[0] - b[0], a[1] - b[1]}; }

/// Direct sum of twisted copies of the ring: summand i is A(twist_i), graded
/// so that a degree-d element has component i of degree d + twist_i.
struct GradedFreeModule {
    RingPtr ring;
    std::vector<Twist> twists;

    GradedFreeModule() = default;
    GradedFreeModule(RingPtr r, std::vector<Twist> t) : ring(std::move(r)), twists(std::move(t)) {
        if (twists.empty()) throw InputError("free module needs at least one summand");
    }
    static GradedFreeModule of_rank1(RingPtr r, std::vector<long> t) {
        std::vector<Twist> tw;
        tw.reserve(t.size());
        for (long a : t) tw.push_back(twist1(a));
        return GradedFreeModule(std::move(r), std::move(tw));
    }

    std::size_t rank() const { return twists.size(); }
    bool operator==(const GradedFreeModule& o) const {
        return twists == o.twists && ring->compatible(*o.ring);
    }
};

/// Element of a graded free module, one polynomial per summand.
template <class K> struct FreeModuleElement {
    GradedFreeModule module;
    std::vector<Poly<K>> comps;

    FreeModuleElement() = default;
    FreeModuleElement(GradedFreeModule m, std::vector<Poly<K>> c)
        : module(std::move(m)), comps(std::move(c)) {
        if (comps.size() != module.rank())
            throw StructureError("component count does not match module rank");
    }
    static FreeModuleElement zero(const GradedFreeModule& m) {
        std::vector<Poly<K>> c(m.rank(), Poly<K>::zero(m.ring));
        return FreeModuleElement(m, std::move(c));
    }
    /// p * e_i
    static FreeModuleElement basis(const GradedFreeModule& m, std::size_t i, Poly<K> p) {
        auto e = zero(m);
        e.comps.at(i) = std::move(p);
        return e;
    }

    bool is_zero() const {
        for (const auto& c : comps)
            if (!c.is_zero()) return false;
        return true;
    }
    bool is_homogeneous() const {
        bool seen = false;
        Twist d{};
        for (std::size_t i = 0; i < comps.size(); ++i) {
            if (comps[i].is_zero()) continue;
            if (!comps[i].is_homogeneous()) return false;
            auto cd = comps[i].graded_degree();
            Twist di = twist_sub({cd[0], cd[1]}, module.twists[i]);
            if (seen && di != d) return false;
            d = di;
            seen = true;
        }
        return true;
    }
    /// Module degree of a homogeneous nonzero element.
    Twist degree() const {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            if (comps[i].is_zero()) continue;
            auto cd = comps[i].graded_degree();
            return twist_sub({cd[0], cd[1]}, module.twists[i]);
        }
        throw StructureError("degree of zero module element");
    }

    FreeModuleElement operator+(const FreeModuleElement& o) const {
        auto r = *this;
        for (std::size_t i = 0; i < comps.size(); ++i) r.comps[i] = r.comps[i] + o.comps[i];
        return r;
    }
    FreeModuleElement operator-(const FreeModuleElement& o) const {
        auto r = *this;
        for (std::size_t i = 0; i < comps.size(); ++i) r.comps[i] = r.comps[i] - o.comps[i];
        return r;
    }
    FreeModuleElement times(const Poly<K>& p) const {
        auto r = *this;
        for (auto& c : r.comps) c = c * p;
        return r;
    }
    FreeModuleElement times_term(const K& c, const Monomial& m) const {
        auto r = *this;
        for (auto& comp : r.comps) comp = comp.times_term(c, m);
        return r;
    }
    bool operator==(const FreeModuleElement& o) const { return comps == o.comps; }
};

namespace module_detail {

/// Position-over-term: earlier components dominate; ties use the ambient
/// order on monomials.
struct PotLead {
    int comp = -1;
    Monomial m;
};

template <class K>
PotLead lead_of(const FreeModuleElement<K>& v, const MonomialOrder& ord) {
    for (std::size_t i = 0; i < v.comps.size(); ++i) {
        if (v.comps[i].is_zero()) continue;
        return {static_cast<int>(i), v.comps[i].leading_term(ord).m};
    }
    return {};
}

template <class K>
K lead_coeff(const FreeModuleElement<K>& v, const MonomialOrder& ord) {
    for (const auto& c : v.comps)
        if (!c.is_zero()) return c.leading_term(ord).c;
    throw StructureError("lead of zero module element");
}

/// Full normal form of v against basis under POT.
template <class K>
FreeModuleElement<K> module_nf(FreeModuleElement<K> v,
                               const std::vector<FreeModuleElement<K>>& basis,
                               const MonomialOrder& ord, const Budget& budget) {
    const RingPtr& ring = v.module.ring;
    FreeModuleElement<K> head = FreeModuleElement<K>::zero(v.module);
    std::uint64_t steps = 0;
    const std::uint64_t cap = budget.max_pairs * 64 + 1000000;
    while (!v.is_zero()) {
        if (++steps > cap) throw ResourceError("module reduction exceeded step budget");
        PotLead lt = lead_of(v, ord);
        if (lt.m.total_degree() > budget.max_degree)
            throw ResourceError("module reduction exceeded degree budget");
        bool reduced = false;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (basis[b].is_zero()) continue;
            PotLead bl = lead_of(basis[b], ord);
            if (bl.comp != lt.comp || !bl.m.divides(lt.m)) continue;
            K c = v.comps[static_cast<std::size_t>(lt.comp)].leading_term(ord).c /
                  lead_coeff(basis[b], ord);
            Monomial q = lt.m.div(bl.m);
            v = v - basis[b].times_term(c, q);
            reduced = true;
            break;
        }
        if (!reduced) {
            // move the lead term out of the working element
            K c = v.comps[static_cast<std::size_t>(lt.comp)].leading_term(ord).c;
            auto t = Poly<K>::term(ring, c, lt.m);
            head.comps[static_cast<std::size_t>(lt.comp)] =
                head.comps[static_cast<std::size_t>(lt.comp)] + t;
            v.comps[static_cast<std::size_t>(lt.comp)] =
                v.comps[static_cast<std::size_t>(lt.comp)] - t;
        }
    }
    return head;
}

/// Buchberger for submodules of a free module, POT order. Pairs only form
/// between elements sharing the lead component; no coprime-lead shortcut
/// (it is not valid for modules).
template <class K>
std::vector<FreeModuleElement<K>> module_basis(std::vector<FreeModuleElement<K>> gens,
                                               const MonomialOrder& ord, const Budget& budget) {
    std::vector<FreeModuleElement<K>> g;
    for (auto& e : gens)
        if (!e.is_zero()) g.push_back(std::move(e));
    struct Pair { std::size_t i, j; Monomial lcm; };
    std::vector<Pair> pairs;
    auto add_pairs = [&](std::size_t t) {
        PotLead lt = lead_of(g[t], ord);
        for (std::size_t i = 0; i < t; ++i) {
            PotLead li = lead_of(g[i], ord);
            if (li.comp != lt.comp) continue;
            pairs.push_back({i, t, li.m.lcm(lt.m)});
        }
    };
    for (std::size_t i = 0; i < g.size(); ++i) add_pairs(i);
    std::uint64_t processed = 0;
    while (!pairs.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < pairs.size(); ++k)
            if (ord.less(pairs[k].lcm, pairs[best].lcm)) best = k;
        Pair pr = pairs[best];
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
        if (++processed > budget.max_pairs)
            throw ResourceError("module basis exceeded pair budget");
        if (pr.lcm.total_degree() > budget.max_degree)
            throw ResourceError("module basis exceeded degree budget");
        PotLead li = lead_of(g[pr.i], ord), lj = lead_of(g[pr.j], ord);
        K ci = lead_coeff(g[pr.i], ord), cj = lead_coeff(g[pr.j], ord);
        auto s = g[pr.i].times_term(ci.inv(), pr.lcm.div(li.m)) -
                 g[pr.j].times_term(cj.inv(), pr.lcm.div(lj.m));
        auto r = module_nf(std::move(s), g, ord, budget);
        if (r.is_zero()) continue;
        g.push_back(std::move(r));
        if (g.size() > budget.max_basis) throw ResourceError("module basis exceeded size budget");
        add_pairs(g.size() - 1);
    }
    return g;
}

} // namespace module_detail

/// Generating set of the syzygy module of the given elements: relations
/// (c_1..c_k) with sum c_i * gen_i = 0. Twist of slot i is minus the module
/// degree of generator i, so homogeneous input yields homogeneous syzygies.
template <class K>
std::vector<FreeModuleElement<K>> module_syzygies(const std::vector<FreeModuleElement<K>>& gens,
                                                  const MonomialOrder& ord = MonomialOrder::grevlex(),
                                                  const Budget& budget = Budget::defaults()) {
    if (gens.empty()) return {};
    const GradedFreeModule& f = gens[0].module;
    const RingPtr& ring = f.ring;
    std::vector<Twist> big_twists = f.twists;
    std::vector<Twist> syz_twists;
    for (const auto& gen : gens) {
        Twist d = gen.is_zero() ? Twist{0, 0} : gen.degree();
        big_twists.push_back({-d[0], -d[1]});
        syz_twists.push_back({-d[0], -d[1]});
    }
    GradedFreeModule big(ring, big_twists);
    GradedFreeModule syz(ring, syz_twists);

    std::vector<FreeModuleElement<K>> graph;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto e = FreeModuleElement<K>::zero(big);
        for (std::size_t c = 0; c < f.rank(); ++c) e.comps[c] = gens[i].comps[c];
        e.comps[f.rank() + i] = Poly<K>::from_int(ring, 1);
        graph.push_back(std::move(e));
    }
    auto basis = module_detail::module_basis(std::move(graph), ord, budget);
    std::vector<FreeModuleElement<K>> out;
    for (const auto& e : basis) {
        bool pure = true;
        for (std::size_t c = 0; c < f.rank(); ++c)
            if (!e.comps[c].is_zero()) { pure = false; break; }
        if (!pure) continue;
        std::vector<Poly<K>> coords(e.comps.begin() + static_cast<std::ptrdiff_t>(f.rank()),
                                    e.comps.end());
        out.push_back(FreeModuleElement<K>(syz, std::move(coords)));
    }
    return out;
}

/// Coordinates expressing target through the generators, when it lies in
/// their span; "not in submodule" is a normal negative result.
template <class K>
std::optional<std::vector<Poly<K>>> module_lift(const FreeModuleElement<K>& target,
                                                const std::vector<FreeModuleElement<K>>& gens,
                                                const MonomialOrder& ord = MonomialOrder::grevlex(),
                                                const Budget& budget = Budget::defaults()) {
    const GradedFreeModule& f = target.module;
    const RingPtr& ring = f.ring;
    if (target.is_zero())
        return std::vector<Poly<K>>(gens.size(), Poly<K>::zero(ring));
    std::vector<Twist> big_twists = f.twists;
    for (const auto& gen : gens) {
        Twist d = gen.is_zero() ? Twist{0, 0} : gen.degree();
        big_twists.push_back({-d[0], -d[1]});
    }
    GradedFreeModule big(ring, big_twists);
    std::vector<FreeModuleElement<K>> graph;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto e = FreeModuleElement<K>::zero(big);
        for (std::size_t c = 0; c < f.rank(); ++c) e.comps[c] = gens[i].comps[c];
        e.comps[f.rank() + i] = Poly<K>::from_int(ring, 1);
        graph.push_back(std::move(e));
    }
    auto basis = module_detail::module_basis(std::move(graph), ord, budget);

    auto t = FreeModuleElement<K>::zero(big);
    for (std::size_t c = 0; c < f.rank(); ++c) t.comps[c] = target.comps[c];
    auto nf = module_detail::module_nf(std::move(t), basis, ord, budget);
    for (std::size_t c = 0; c < f.rank(); ++c)
        if (!nf.comps[c].is_zero()) return std::nullopt;

    // every span element satisfies F-part = sum of tracking slots times the
    // generators, so the residue's tracking slots are minus the coordinates
    std::vector<Poly<K>> coords(gens.size(), Poly<K>::zero(ring));
    for (std::size_t i = 0; i < gens.size(); ++i)
        coords[i] = -nf.comps[f.rank() + i];
    return coords;
}

} // namespace canproj
