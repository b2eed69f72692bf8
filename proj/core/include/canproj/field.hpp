#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "canproj/errors.hpp"
#include "canproj/rng.hpp"

namespace canproj {

/// Runtime description of the coefficient field: exact rationals or F_p
/// for a machine-word prime p.
struct FieldSpec {
    enum class Kind { rationals, prime };
    Kind kind = Kind::rationals;
    std::uint32_t p = 0; // modulus when kind == prime

    static FieldSpec rationals() { return FieldSpec{Kind::rationals, 0}; }
    static FieldSpec prime(std::uint32_t p);

    bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    std::string to_string() const {
        return kind == Kind::rationals ? "q" : "fp " + std::to_string(p);
    }
};

namespace detail {

inline std::uint64_t pow_mod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    unsigned __int128 acc = 1, base = b % m;
    while (e) {
        if (e & 1) acc = acc * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(acc);
}

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    // deterministic Miller-Rabin for 32-bit range
    std::uint32_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint32_t a : {2u, 3u, 5u, 7u}) {
        std::uint64_t x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = static_cast<std::uint64_t>(x) * x % n;
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

inline FieldSpec FieldSpec::prime(std::uint32_t p) {
    if (p < 2 || p >= (1u << 31) || !detail::is_prime_u32(p))
        throw InputError("field modulus must be a prime below 2^31, got " + std::to_string(p));
    return FieldSpec{Kind::prime, p};
}

/// Exact rational, GMP-backed. Always stored canonicalized.
class QQ {
public:
    QQ() : v_(0) {}
    QQ(long n) : v_(static_cast<signed long>(n)) {}
    QQ(long n, unsigned long d) : v_(static_cast<signed long>(n), d) { v_.canonicalize(); }
    explicit QQ(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit QQ(const mpz_class& n) : v_(n) {}

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    QQ operator+(const QQ& o) const { return QQ(mpq_class(v_ + o.v_)); }
    QQ operator-(const QQ& o) const { return QQ(mpq_class(v_ - o.v_)); }
    QQ operator*(const QQ& o) const { return QQ(mpq_class(v_ * o.v_)); }
    QQ operator/(const QQ& o) const {
        if (o.is_zero()) throw StructureError("rational division by zero");
        return QQ(mpq_class(v_ / o.v_));
    }
    QQ operator-() const { return QQ(mpq_class(-v_)); }
    QQ& operator+=(const QQ& o) { v_ += o.v_; return *this; }
    QQ& operator-=(const QQ& o) { v_ -= o.v_; return *this; }
    QQ& operator*=(const QQ& o) { v_ *= o.v_; return *this; }
    bool operator==(const QQ& o) const { return v_ == o.v_; }
    bool operator!=(const QQ& o) const { return v_ != o.v_; }

    QQ inv() const {
        if (is_zero()) throw StructureError("inverse of zero");
        return QQ(mpq_class(1 / v_));
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    int sign() const { return sgn(v_); }

    /// "n" for integers, "n/d" otherwise.
    std::string to_string() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    mpq_class v_;
};

/// Element of F_p. The modulus travels with the value; mixing moduli is a bug
/// and is checked on every binary op.
class Fp {
public:
    Fp() : v_(0), p_(0) {}
    Fp(std::uint32_t v, std::uint32_t p) : v_(v % p), p_(p) {}

    static Fp from_int(std::int64_t n, std::uint32_t p) {
        std::int64_t r = n % static_cast<std::int64_t>(p);
        if (r < 0) r += p;
        return Fp(static_cast<std::uint32_t>(r), p);
    }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return p_; }

    Fp operator+(const Fp& o) const {
        check(o);
        std::uint32_t s = v_ + o.v_;
        if (s >= p_) s -= p_;
        return Fp(s, p_, 0);
    }
    Fp operator-(const Fp& o) const {
        check(o);
        std::uint32_t s = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return Fp(s, p_, 0);
    }
    Fp operator*(const Fp& o) const {
        check(o);
        return Fp(static_cast<std::uint32_t>(std::uint64_t(v_) * o.v_ % p_), p_, 0);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }
    Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_, 0); }
    Fp& operator+=(const Fp& o) { *this = *this + o; return *this; }
    Fp& operator-=(const Fp& o) { *this = *this - o; return *this; }
    Fp& operator*=(const Fp& o) { *this = *this * o; return *this; }
    bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    Fp inv() const {
        if (v_ == 0) throw StructureError("inverse of zero in F_" + std::to_string(p_));
        // extended Euclid
        std::int64_t a = v_, b = p_, x0 = 1, x1 = 0;
        while (b) {
            std::int64_t q = a / b;
            std::int64_t t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        if (x0 < 0) x0 += p_;
        return Fp(static_cast<std::uint32_t>(x0), p_, 0);
    }

    std::string to_string() const { return std::to_string(v_); }

private:
    Fp(std::uint32_t v, std::uint32_t p, int) : v_(v), p_(p) {} // no reduction
    void check(const Fp& o) const {
        if (p_ != o.p_) throw StructureError("mixed F_p moduli: " + std::to_string(p_) + " vs " + std::to_string(o.p_));
    }
    std::uint32_t v_;
    std::uint32_t p_;
};

/// Uniform construction/inspection of field elements from a FieldSpec.
template <class K> struct FieldOps;

template <> struct FieldOps<QQ> {
    static constexpr FieldSpec::Kind kind = FieldSpec::Kind::rationals;
    static QQ zero(const FieldSpec&) { return QQ(0); }
    static QQ one(const FieldSpec&) { return QQ(1); }
    static QQ from_int(std::int64_t n, const FieldSpec&) { return QQ(static_cast<long>(n)); }
    static QQ from_fraction(std::int64_t n, std::int64_t d, const FieldSpec&) {
        if (d == 0) throw InputError("zero denominator in rational literal");
        QQ r(static_cast<long>(n));
        return r / QQ(static_cast<long>(d));
    }
    /// Small nonzero rationals keep seeded constructions readable and exact.
    static QQ random(Rng& rng, const FieldSpec&, bool nonzero) {
        std::int64_t v = rng.range(-20, 20);
        while (nonzero && v == 0) v = rng.range(-20, 20);
        return QQ(static_cast<long>(v));
    }
    static bool matches(const QQ&, const FieldSpec& s) { return s.kind == FieldSpec::Kind::rationals; }
    static bool is_negative(const QQ& v) { return v.sign() < 0; }
};

template <> struct FieldOps<Fp> {
    static constexpr FieldSpec::Kind kind = FieldSpec::Kind::prime;
    static Fp zero(const FieldSpec& s) { return Fp(0, s.p); }
    static Fp one(const FieldSpec& s) { return Fp(1, s.p); }
    static Fp from_int(std::int64_t n, const FieldSpec& s) { return Fp::from_int(n, s.p); }
    static Fp from_fraction(std::int64_t n, std::int64_t d, const FieldSpec& s) {
        return Fp::from_int(n, s.p) / Fp::from_int(d, s.p);
    }
    static Fp random(Rng& rng, const FieldSpec& s, bool nonzero) {
        std::uint64_t lo = nonzero ? 1 : 0;
        return Fp(static_cast<std::uint32_t>(lo + rng.below(s.p - lo)), s.p);
    }
    static bool matches(const Fp& v, const FieldSpec& s) {
        return s.kind == FieldSpec::Kind::prime && v.modulus() == s.p;
    }
    static bool is_negative(const Fp&) { return false; }
};

} // namespace canproj
