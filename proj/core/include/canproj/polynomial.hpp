#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "canproj/ring.hpp"

namespace canproj {

/// All monomials in n variables of total degree exactly d, grevlex-descending.
inline std::vector<Monomial> monomials_of_total_degree(int nvars, int d) {
    std::vector<Monomial> out;
    if (d < 0) return out;
    Monomial m = Monomial::one(nvars);
    // recursive enumeration, then sort once
    std::vector<int> stack;
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == nvars - 1) {
            m.e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(rem);
            out.push_back(m);
            m.e[static_cast<std::size_t>(var)] = 0;
            return;
        }
        for (int k = rem; k >= 0; --k) {
            m.e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(k);
            self(self, var + 1, rem - k);
        }
        m.e[static_cast<std::size_t>(var)] = 0;
    };
    rec(rec, 0, d);
    MonomialOrder g = MonomialOrder::grevlex();
    std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return g.greater(a, b); });
    return out;
}

/// All monomials of a given multidegree under the ring's grading.
inline std::vector<Monomial> monomials_of_degree(const RingSpec& ring, std::array<long, 2> deg) {
    int n = ring.nvars();
    long total = deg[0] + deg[1];
    std::vector<Monomial> out;
    if (total < 0 || total > 0xffff) return out;
    for (const Monomial& m : monomials_of_total_degree(n, static_cast<int>(total)))
        if (ring.grading().degree(m) == deg) out.push_back(m);
    return out;
}

inline std::vector<Monomial> monomials_of_degree(const RingSpec& ring, long d) {
    if (ring.grading().rank != 1)
        throw StructureError("scalar degree request in a multigraded ring");
    // standard grading: every variable weight (1,0)
    return monomials_of_degree(ring, {d, 0});
}

inline long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// dim of the space of degree-d forms in nvars variables.
inline long long forms_dim(int nvars, long d) {
    return d < 0 ? 0 : binomial(d + nvars - 1, nvars - 1);
}

template <class K> struct Term {
    K c;
    Monomial m;
};

/// Sparse polynomial. Terms are kept grevlex-descending with nonzero
/// coefficients and distinct monomials; every operation restores this.
template <class K> class Poly {
public:
    Poly() = default;
    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly zero(RingPtr ring) { return Poly(std::move(ring)); }
    static Poly constant(RingPtr ring, K c) {
        Poly p(std::move(ring));
        if (!c.is_zero()) p.terms_.push_back({std::move(c), Monomial::one(p.ring_->nvars())});
        return p;
    }
    static Poly from_int(RingPtr ring, std::int64_t n) {
        K c = FieldOps<K>::from_int(n, ring->field());
        return constant(std::move(ring), std::move(c));
    }
    static Poly var(RingPtr ring, int i, int power = 1) {
        Poly p(ring);
        if (i < 0 || i >= ring->nvars()) throw InputError("variable index out of range");
        p.terms_.push_back({FieldOps<K>::one(ring->field()), Monomial::var(i, ring->nvars(), power)});
        return p;
    }
    static Poly term(RingPtr ring, K c, const Monomial& m) {
        Poly p(std::move(ring));
        if (!c.is_zero()) p.terms_.push_back({std::move(c), m});
        return p;
    }
    static Poly from_terms(RingPtr ring, std::vector<Term<K>> terms) {
        Poly p(std::move(ring));
        p.terms_ = std::move(terms);
        p.normalize();
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term<K>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one());
    }
    /// Constant term (zero if absent).
    K constant_value() const {
        for (const auto& t : terms_)
            if (t.m.is_one()) return t.c;
        return FieldOps<K>::zero(ring_->field());
    }

    /// Max total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, t.m.total_degree());
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        auto d0 = ring_->grading().degree(terms_[0].m);
        for (const auto& t : terms_)
            if (ring_->grading().degree(t.m) != d0) return false;
        return true;
    }
    /// Multidegree of a homogeneous polynomial.
    std::array<long, 2> graded_degree() const {
        if (terms_.empty()) throw StructureError("graded degree of zero polynomial");
        if (!is_homogeneous()) throw StructureError("graded degree of inhomogeneous polynomial");
        return ring_->grading().degree(terms_[0].m);
    }

    std::map<std::array<long, 2>, Poly> homogeneous_components() const {
        std::map<std::array<long, 2>, std::vector<Term<K>>> buckets;
        for (const auto& t : terms_) buckets[ring_->grading().degree(t.m)].push_back(t);
        std::map<std::array<long, 2>, Poly> out;
        for (auto& [d, ts] : buckets) out.emplace(d, from_terms(ring_, std::move(ts)));
        return out;
    }

    const Term<K>& leading_term() const {
        if (terms_.empty()) throw StructureError("leading term of zero polynomial");
        return terms_.front();
    }
    const Term<K>& leading_term(const MonomialOrder& ord) const {
        if (terms_.empty()) throw StructureError("leading term of zero polynomial");
        if (ord.kind == MonomialOrder::Kind::grevlex) return terms_.front();
        std::size_t best = 0;
        for (std::size_t i = 1; i < terms_.size(); ++i)
            if (ord.greater(terms_[i].m, terms_[best].m)) best = i;
        return terms_[best];
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }
    Poly operator+(const Poly& o) const {
        check_ring(o);
        Poly r(ring_);
        r.terms_ = merge(terms_, o.terms_, false);
        return r;
    }
    Poly operator-(const Poly& o) const {
        check_ring(o);
        Poly r(ring_);
        r.terms_ = merge(terms_, o.terms_, true);
        return r;
    }
    Poly operator*(const Poly& o) const {
        check_ring(o);
        Poly r(ring_);
        if (terms_.empty() || o.terms_.empty()) return r;
        if (o.terms_.size() == 1) return times_term(o.terms_[0].c, o.terms_[0].m);
        if (terms_.size() == 1) return o.times_term(terms_[0].c, terms_[0].m);
        std::unordered_map<Monomial, K, MonomialHash> acc;
        acc.reserve(terms_.size() * o.terms_.size());
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) {
                Monomial m = a.m * b.m;
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(std::move(m), a.c * b.c);
                else it->second += a.c * b.c;
            }
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({std::move(c), m});
        r.sort_canonical();
        return r;
    }
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly times_scalar(const K& c) const {
        Poly r(ring_);
        if (c.is_zero()) return r;
        r.terms_ = terms_;
        for (auto& t : r.terms_) t.c = t.c * c;
        return r;
    }
    /// this * (c * m): shifts every exponent, order is preserved.
    Poly times_term(const K& c, const Monomial& m) const {
        Poly r(ring_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.c * c, t.m * m});
        return r;
    }
    Poly pow(int e) const {
        if (e < 0) throw InputError("negative polynomial power");
        Poly r = from_int(ring_, 1);
        Poly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            if (e >>= 1) base = base * base;
        }
        return r;
    }

    bool operator==(const Poly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].m != o.terms_[i].m || terms_[i].c != o.terms_[i].c) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    K coefficient_of(const Monomial& m) const {
        for (const auto& t : terms_)
            if (t.m == m) return t.c;
        return FieldOps<K>::zero(ring_->field());
    }

    /// Leading coefficient scaled to 1 under the canonical order.
    Poly monic() const {
        if (terms_.empty()) return *this;
        return times_scalar(terms_.front().c.inv());
    }
    Poly monic(const MonomialOrder& ord) const {
        if (terms_.empty()) return *this;
        return times_scalar(leading_term(ord).c.inv());
    }

    Poly derivative(int var) const {
        Poly r(ring_);
        for (const auto& t : terms_) {
            int e = t.m.degree_in(var);
            if (e == 0) continue;
            Monomial m = t.m;
            m.e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(e - 1);
            K c = t.c * FieldOps<K>::from_int(e, ring_->field());
            if (!c.is_zero()) r.terms_.push_back({std::move(c), m});
        }
        r.normalize();
        return r;
    }

    K eval(const std::vector<K>& point) const {
        if (static_cast<int>(point.size()) != ring_->nvars())
            throw InputError("evaluation point has wrong length");
        K acc = FieldOps<K>::zero(ring_->field());
        for (const auto& t : terms_) {
            K v = t.c;
            for (int i = 0; i < ring_->nvars(); ++i)
                for (int k = 0; k < t.m.degree_in(i); ++k) v = v * point[static_cast<std::size_t>(i)];
            acc += v;
        }
        return acc;
    }

    /// Ring map determined by images of the variables (all in one target ring).
    Poly substitute(const std::vector<Poly>& images) const {
        if (images.empty()) throw InputError("substitution needs at least one image");
        if (static_cast<int>(images.size()) != ring_->nvars())
            throw InputError("substitution image count does not match variable count");
        RingPtr target = images[0].ring();
        Poly acc = Poly::zero(target);
        // cache powers per variable, built lazily
        std::vector<std::vector<Poly>> powers(images.size());
        auto power_of = [&](int var, int e) -> const Poly& {
            auto& cache = powers[static_cast<std::size_t>(var)];
            if (cache.empty()) cache.push_back(from_int(target, 1));
            while (static_cast<int>(cache.size()) <= e)
                cache.push_back(cache.back() * images[static_cast<std::size_t>(var)]);
            return cache[static_cast<std::size_t>(e)];
        };
        for (const auto& t : terms_) {
            Poly prod = constant(target, t.c);
            for (int i = 0; i < ring_->nvars(); ++i)
                if (int e = t.m.degree_in(i)) prod = prod * power_of(i, e);
            acc += prod;
        }
        return acc;
    }

    /// Transport into another ring: variable i here becomes var_map[i] there.
    Poly map_variables(const RingPtr& target, const std::vector<int>& var_map) const {
        if (static_cast<int>(var_map.size()) != ring_->nvars())
            throw InputError("variable map has wrong length");
        Poly r(target);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial m = Monomial::one(target->nvars());
            for (int i = 0; i < ring_->nvars(); ++i) {
                int j = var_map[static_cast<std::size_t>(i)];
                if (t.m.e[i] && (j < 0 || j >= target->nvars()))
                    throw StructureError("variable " + ring_->name(i) + " has no image in target ring");
                if (t.m.e[i]) m.e[static_cast<std::size_t>(j)] = t.m.e[i];
            }
            r.terms_.push_back({t.c, m});
        }
        r.normalize();
        return r;
    }

    /// Exact division; throws StructureError when the quotient is not polynomial.
    Poly divide_exact(const Poly& d) const {
        check_ring(d);
        if (d.is_zero()) throw StructureError("exact division by zero");
        Poly rem = *this;
        Poly q(ring_);
        const Term<K>& dl = d.terms_.front();
        while (!rem.is_zero()) {
            const Term<K>& rl = rem.terms_.front();
            if (!dl.m.divides(rl.m))
                throw StructureError("exact division has a remainder");
            K c = rl.c / dl.c;
            Monomial m = rl.m.div(dl.m);
            q.terms_.push_back({c, m});
            rem = rem - d.times_term(c, m);
        }
        q.normalize();
        return q;
    }
    bool divides(const Poly& other) const {
        if (is_zero()) return other.is_zero();
        Poly rem = other;
        const Term<K>& dl = terms_.front();
        while (!rem.is_zero()) {
            const Term<K>& rl = rem.terms_.front();
            if (!dl.m.divides(rl.m)) return false;
            rem = rem - times_term(rl.c / dl.c, rl.m.div(dl.m));
        }
        return true;
    }

    /// Largest e with d^e dividing this (zero polynomial rejects).
    int max_power_dividing(const Poly& d) const {
        if (is_zero() || d.is_zero() || d.is_constant())
            throw StructureError("max power query needs nonzero, nonconstant divisor");
        int e = 0;
        Poly cur = *this;
        while (d.divides(cur)) {
            cur = cur.divide_exact(d);
            ++e;
        }
        return e;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& t : terms_) {
            K c = t.c;
            bool neg = FieldOps<K>::is_negative(c);
            if (neg) c = -c;
            if (first) {
                if (neg) s += "-";
                first = false;
            } else {
                s += neg ? "-" : "+";
            }
            std::string mono = mono_string(t.m);
            if (mono.empty()) s += c.to_string();
            else if (c.is_one()) s += mono;
            else s += c.to_string() + "*" + mono;
        }
        return s;
    }

    std::vector<Term<K>> sorted_terms(const MonomialOrder& ord) const {
        std::vector<Term<K>> ts = terms_;
        if (ord.kind != MonomialOrder::Kind::grevlex)
            std::sort(ts.begin(), ts.end(),
                      [&](const Term<K>& a, const Term<K>& b) { return ord.greater(a.m, b.m); });
        return ts;
    }

    void check_ring(const Poly& o) const {
        if (ring_.get() == o.ring_.get()) return;
        if (!ring_ || !o.ring_ || !ring_->compatible(*o.ring_))
            throw StructureError("polynomials live in different rings");
    }

private:
    std::string mono_string(const Monomial& m) const {
        std::string s;
        for (int i = 0; i < ring_->nvars(); ++i) {
            int e = m.degree_in(i);
            if (!e) continue;
            if (!s.empty()) s += "*";
            s += ring_->name(i);
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s;
    }

    void sort_canonical() {
        MonomialOrder g = MonomialOrder::grevlex();
        std::sort(terms_.begin(), terms_.end(),
                  [&](const Term<K>& a, const Term<K>& b) { return g.greater(a.m, b.m); });
    }
    void normalize() {
        sort_canonical();
        std::vector<Term<K>> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().m == t.m) out.back().c += t.c;
            else out.push_back(std::move(t));
            if (!out.empty() && out.back().c.is_zero()) out.pop_back();
        }
        terms_ = std::move(out);
    }

    /// Merge of two canonically sorted term lists (subtract when sub).
    static std::vector<Term<K>> merge(const std::vector<Term<K>>& a, const std::vector<Term<K>>& b,
                                      bool sub) {
        MonomialOrder g = MonomialOrder::grevlex();
        std::vector<Term<K>> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            int c = g.compare(a[i].m, b[j].m);
            if (c > 0) out.push_back(a[i++]);
            else if (c < 0) out.push_back({sub ? -b[j].c : b[j].c, b[j].m}), ++j;
            else {
                K v = sub ? a[i].c - b[j].c : a[i].c + b[j].c;
                if (!v.is_zero()) out.push_back({std::move(v), a[i].m});
                ++i; ++j;
            }
        }
        while (i < a.size()) out.push_back(a[i++]);
        while (j < b.size()) out.push_back({sub ? -b[j].c : b[j].c, b[j].m}), ++j;
        return out;
    }

    RingPtr ring_;
    std::vector<Term<K>> terms_;
};

template <class K> Poly<K> operator*(const K& c, const Poly<K>& p) { return p.times_scalar(c); }

namespace parser_detail {

template <class K> class PolyParser {
public:
    PolyParser(RingPtr ring, const std::string& src) : ring_(std::move(ring)), src_(src) {}

    Poly<K> parse() {
        Poly<K> p = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
        return p;
    }

private:
    Poly<K> parse_expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (src_[pos_++] == '-');
        Poly<K> acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Poly<K> t = parse_term();
                acc = (c == '+') ? acc + t : acc - t;
            } else break;
        }
        return acc;
    }
    Poly<K> parse_term() {
        Poly<K> acc = parse_factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * parse_factor();
            } else break;
        }
        return acc;
    }
    Poly<K> parse_factor() {
        Poly<K> base = parse_base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            std::int64_t e = parse_int();
            if (e < 0 || e > 0xffff) throw ParseError("exponent out of range", pos_);
            base = base.pow(static_cast<int>(e));
        }
        return base;
    }
    Poly<K> parse_base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly<K> e = parse_expr();
            skip_ws();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t n = parse_int();
            skip_ws();
            if (peek() == '/') {
                std::size_t save = pos_;
                ++pos_;
                skip_ws();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    std::int64_t d = parse_int();
                    if (d == 0) throw ParseError("zero denominator", save);
                    return Poly<K>::constant(ring_, FieldOps<K>::from_fraction(n, d, ring_->field()));
                }
                pos_ = save;
            }
            return Poly<K>::from_int(ring_, n);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            int idx = ring_->var_index(name);
            if (idx < 0) throw ParseError("unknown variable '" + name + "'", start);
            return Poly<K>::var(ring_, idx);
        }
        if (c == '\0') throw ParseError("unexpected end of input", pos_);
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }
    std::int64_t parse_int() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected a number", pos_);
        std::string digits = src_.substr(start, pos_ - start);
        if (digits.size() > 18) throw ParseError("integer literal too large", start);
        return std::stoll(digits);
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    RingPtr ring_;
    const std::string& src_;
    std::size_t pos_ = 0;
};

} // namespace parser_detail

template <class K> Poly<K> parse_poly(const RingPtr& ring, const std::string& src) {
    return parser_detail::PolyParser<K>(ring, src).parse();
}

/// Seeded homogeneous polynomial of the given multidegree: dense over the
/// monomial basis with random coefficients. nonzero retries until some
/// coefficient survives (possible only when the degree is attainable).
template <class K>
Poly<K> random_homogeneous(const RingPtr& ring, std::array<long, 2> deg, Rng& rng,
                           bool nonzero = true) {
    auto monos = monomials_of_degree(*ring, deg);
    if (monos.empty()) {
        if (nonzero) throw StructureError("no monomials of the requested degree");
        return Poly<K>::zero(ring);
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Term<K>> terms;
        for (const auto& m : monos) {
            K c = FieldOps<K>::random(rng, ring->field(), false);
            if (!c.is_zero()) terms.push_back({std::move(c), m});
        }
        Poly<K> p = Poly<K>::from_terms(ring, std::move(terms));
        if (!nonzero || !p.is_zero()) return p;
    }
    throw StructureError("random sampling kept producing zero");
}

template <class K>
Poly<K> random_homogeneous(const RingPtr& ring, long deg, Rng& rng, bool nonzero = true) {
    if (ring->grading().rank != 1)
        throw StructureError("scalar-degree sampling needs a rank-1 grading");
    return random_homogeneous<K>(ring, {deg, 0}, rng, nonzero);
}

} // namespace canproj
