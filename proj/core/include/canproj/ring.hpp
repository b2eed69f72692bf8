#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "canproj/errors.hpp"
#include "canproj/field.hpp"

namespace canproj {

inline constexpr int kMaxVars = 16;

/// Exponent vector, fixed capacity. Only the first nvars entries are live;
/// the rest stay zero so comparisons can scan the full array.
struct Monomial {
    std::array<std::uint16_t, kMaxVars> e{};
    std::uint8_t nvars = 0;

    static Monomial one(int nvars) {
        Monomial m;
        m.nvars = static_cast<std::uint8_t>(nvars);
        return m;
    }
    static Monomial var(int i, int nvars, int power = 1) {
        Monomial m = one(nvars);
        m.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(power);
        return m;
    }

    bool is_one() const {
        for (int i = 0; i < nvars; ++i) if (e[i]) return false;
        return true;
    }
    int total_degree() const {
        int d = 0;
        for (int i = 0; i < nvars; ++i) d += e[i];
        return d;
    }
    int degree_in(int i) const { return e[static_cast<std::size_t>(i)]; }

    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (int i = 0; i < nvars; ++i) {
            std::uint32_t s = std::uint32_t(e[i]) + o.e[i];
            if (s > 0xffff) throw ResourceError("monomial exponent overflow");
            r.e[i] = static_cast<std::uint16_t>(s);
        }
        return r;
    }
    bool divides(const Monomial& o) const {
        for (int i = 0; i < nvars; ++i) if (e[i] > o.e[i]) return false;
        return true;
    }
    /// Quotient; caller guarantees divisibility.
    Monomial div(const Monomial& o) const {
        Monomial r = *this;
        for (int i = 0; i < nvars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
        return r;
    }
    Monomial lcm(const Monomial& o) const {
        Monomial r = *this;
        for (int i = 0; i < nvars; ++i) r.e[i] = std::max(e[i], o.e[i]);
        return r;
    }
    Monomial gcd(const Monomial& o) const {
        Monomial r = *this;
        for (int i = 0; i < nvars; ++i) r.e[i] = std::min(e[i], o.e[i]);
        return r;
    }
    bool coprime(const Monomial& o) const {
        for (int i = 0; i < nvars; ++i) if (e[i] && o.e[i]) return false;
        return true;
    }
    bool operator==(const Monomial& o) const { return nvars == o.nvars && e == o.e; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::size_t h = m.nvars;
        for (int i = 0; i < m.nvars; ++i) h = h * 1000003u + m.e[i];
        return h;
    }
};

/// Term order. Canonical storage always sorts grevlex-descending; the engine
/// re-sorts working copies when another order is active.
struct MonomialOrder {
    enum class Kind { grevlex, lex, block_elimination, weighted };
    Kind kind = Kind::grevlex;
    int split = 0;                 // block_elimination: vars [0,split) eliminate first
    std::vector<int> weights;      // weighted: one weight per variable

    static MonomialOrder grevlex() { return MonomialOrder{}; }
    static MonomialOrder lex() { return MonomialOrder{Kind::lex, 0, {}}; }
    static MonomialOrder block(int split) { return MonomialOrder{Kind::block_elimination, split, {}}; }
    static MonomialOrder weighted(std::vector<int> w) {
        return MonomialOrder{Kind::weighted, 0, std::move(w)};
    }

    bool operator==(const MonomialOrder& o) const {
        return kind == o.kind && split == o.split && weights == o.weights;
    }

    /// +1 if a > b, 0 if equal, -1 if a < b.
    int compare(const Monomial& a, const Monomial& b) const {
        switch (kind) {
        case Kind::grevlex: return cmp_grevlex(a, b, 0, a.nvars);
        case Kind::lex: return cmp_lex(a, b);
        case Kind::block_elimination: {
            int c = cmp_grevlex(a, b, 0, split);
            if (c) return c;
            return cmp_grevlex(a, b, split, a.nvars);
        }
        case Kind::weighted: {
            long da = 0, db = 0;
            for (int i = 0; i < a.nvars; ++i) {
                da += long(weights.at(static_cast<std::size_t>(i))) * a.e[i];
                db += long(weights.at(static_cast<std::size_t>(i))) * b.e[i];
            }
            if (da != db) return da > db ? 1 : -1;
            return cmp_grevlex(a, b, 0, a.nvars);
        }
        }
        return 0;
    }
    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
    bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

    std::string to_string() const {
        switch (kind) {
        case Kind::grevlex: return "grevlex";
        case Kind::lex: return "lex";
        case Kind::block_elimination: return "block(" + std::to_string(split) + ")";
        case Kind::weighted: {
            std::string s = "weighted(";
            for (std::size_t i = 0; i < weights.size(); ++i)
                s += (i ? "," : "") + std::to_string(weights[i]);
            return s + ")";
        }
        }
        return "?";
    }

private:
    static int cmp_grevlex(const Monomial& a, const Monomial& b, int lo, int hi) {
        int da = 0, db = 0;
        for (int i = lo; i < hi; ++i) { da += a.e[i]; db += b.e[i]; }
        if (da != db) return da > db ? 1 : -1;
        // tie: last nonzero entry of a-b negative means a greater
        for (int i = hi - 1; i >= lo; --i) {
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
        }
        return 0;
    }
    static int cmp_lex(const Monomial& a, const Monomial& b) {
        for (int i = 0; i < a.nvars; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
        return 0;
    }
};

/// Per-variable degree in Z or Z^2. Rank-1 gradings keep the second slot zero.
struct Grading {
    int rank = 1; // 1 or 2
    std::vector<std::array<int, 2>> var_degrees;

    static Grading standard(int nvars) {
        Grading g;
        g.rank = 1;
        g.var_degrees.assign(static_cast<std::size_t>(nvars), {1, 0});
        return g;
    }
    /// Z^2: variables [0,split) get (1,0), the rest (0,1).
    static Grading bidegree(int nvars, int split) {
        Grading g;
        g.rank = 2;
        g.var_degrees.assign(static_cast<std::size_t>(nvars), {0, 1});
        for (int i = 0; i < split; ++i) g.var_degrees[static_cast<std::size_t>(i)] = {1, 0};
        return g;
    }

    std::array<long, 2> degree(const Monomial& m) const {
        std::array<long, 2> d{0, 0};
        for (int i = 0; i < m.nvars; ++i) {
            d[0] += long(var_degrees[static_cast<std::size_t>(i)][0]) * m.e[i];
            d[1] += long(var_degrees[static_cast<std::size_t>(i)][1]) * m.e[i];
        }
        return d;
    }
    bool operator==(const Grading& o) const {
        return rank == o.rank && var_degrees == o.var_degrees;
    }
};

/// Immutable description of a polynomial ring; polynomials share it by pointer.
class RingSpec {
public:
    RingSpec(std::vector<std::string> names, FieldSpec field, Grading grading)
        : names_(std::move(names)), field_(field), grading_(std::move(grading)) {
        if (names_.empty() || names_.size() > kMaxVars)
            throw InputError("ring must have between 1 and " + std::to_string(kMaxVars) + " variables");
        if (grading_.var_degrees.size() != names_.size())
            throw InputError("grading size does not match variable count");
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw InputError("duplicate variable name " + names_[i]);
    }

    static std::shared_ptr<const RingSpec> make(std::vector<std::string> names, FieldSpec field) {
        Grading g = Grading::standard(static_cast<int>(names.size()));
        return std::make_shared<const RingSpec>(std::move(names), field, std::move(g));
    }
    static std::shared_ptr<const RingSpec> make(std::vector<std::string> names, FieldSpec field,
                                                Grading grading) {
        return std::make_shared<const RingSpec>(std::move(names), field, std::move(grading));
    }

    int nvars() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const FieldSpec& field() const { return field_; }
    const Grading& grading() const { return grading_; }

    /// -1 when absent.
    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    /// Same variables, same field, same grading: interchangeable rings.
    bool compatible(const RingSpec& o) const {
        return names_ == o.names_ && field_ == o.field_ && grading_ == o.grading_;
    }

private:
    std::vector<std::string> names_;
    FieldSpec field_;
    Grading grading_;
};

using RingPtr = std::shared_ptr<const RingSpec>;

} // namespace canproj
