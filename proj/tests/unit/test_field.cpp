#include <doctest.h>

#include "canproj/field.hpp"

using namespace canproj;

TEST_CASE("rational arithmetic is exact and canonical") {
    QQ a(3, 7), b(2, 21);
    CHECK((a + b).to_string() == "11/21");
    CHECK((a * b).to_string() == "2/49");
    CHECK((a - a).is_zero());
    CHECK((a / b).to_string() == "9/2");
    CHECK(QQ(6, 4).to_string() == "3/2");
    CHECK(QQ(-6, 4).to_string() == "-3/2");
    CHECK(QQ(0, 5).is_zero());
    CHECK(a.inv().to_string() == "7/3");
    CHECK_THROWS_AS(QQ(0).inv(), StructureError);
}

TEST_CASE("prime field inverses cover every nonzero element") {
    const std::uint32_t p = 101;
    for (std::uint32_t v = 1; v < p; ++v) {
        Fp x(v, p);
        CHECK((x * x.inv()).is_one());
    }
    CHECK_THROWS_AS(Fp(0, p).inv(), StructureError);
}

TEST_CASE("prime field arithmetic wraps correctly") {
    const std::uint32_t p = 31991;
    Fp a(31990, p), b(2, p);
    CHECK((a + b).value() == 1);
    CHECK((b - a).value() == 3);
    CHECK((a * a).value() == 1); // (-1)^2
    CHECK((-b).value() == p - 2);
    CHECK(Fp::from_int(-1, p).value() == p - 1);
    CHECK(Fp::from_int(static_cast<std::int64_t>(p) * 7 + 5, p).value() == 5);
}

TEST_CASE("field spec validates the modulus") {
    CHECK(FieldSpec::prime(2).p == 2);
    CHECK(FieldSpec::prime(10007).p == 10007);
    CHECK(FieldSpec::prime(31991).p == 31991);
    CHECK_THROWS_AS(FieldSpec::prime(1), InputError);
    CHECK_THROWS_AS(FieldSpec::prime(91), InputError);      // 7 * 13
    CHECK_THROWS_AS(FieldSpec::prime(10005), InputError);
    CHECK(FieldSpec::rationals().kind == FieldSpec::Kind::rationals);
}

TEST_CASE("mixed moduli are rejected") {
    Fp a(1, 101), b(1, 103);
    CHECK_THROWS_AS(a + b, StructureError);
}

TEST_CASE("FieldOps builds elements uniformly") {
    auto q = FieldSpec::rationals();
    auto f = FieldSpec::prime(13);
    CHECK(FieldOps<QQ>::from_fraction(1, 2, q).to_string() == "1/2");
    CHECK(FieldOps<Fp>::from_fraction(1, 2, f).value() == 7); // 2*7 = 14 = 1 mod 13
    CHECK(FieldOps<QQ>::one(q).is_one());
    CHECK(FieldOps<Fp>::zero(f).is_zero());
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        CHECK(!FieldOps<Fp>::random(rng, f, true).is_zero());
        CHECK(!FieldOps<QQ>::random(rng, q, true).is_zero());
    }
}
