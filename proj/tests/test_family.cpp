// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heron/family.hpp"
#include "oracles.hpp"

using namespace heron;
using namespace heron::family;

TEST_CASE("validate fixtures") {
    auto v = validate(409);
    REQUIRE(std::holds_alternative<FamilyPair>(v));
    CHECK(std::get<FamilyPair>(v).q == 83641);

    auto r17 = validate(17);  // (17^2 + 1)/2 = 145 = 5 * 29
    REQUIRE(std::holds_alternative<Rejection>(r17));
    CHECK(std::get<Rejection>(r17) == Rejection::q_not_prime);

    auto r11 = validate(11);  // 11 = 3 (mod 8)
    REQUIRE(std::holds_alternative<Rejection>(r11));
    CHECK(std::get<Rejection>(r11) == Rejection::wrong_residue_mod_8);

    auto r9 = validate(9);
    REQUIRE(std::holds_alternative<Rejection>(r9));
    CHECK(std::get<Rejection>(r9) == Rejection::not_prime);

    CHECK(std::string(to_string(Rejection::q_not_prime)) == "q-not-prime");
}

TEST_CASE("scan fixtures") {
    // every pair below 700; the oracle run before the build froze this list
    auto pairs = scan(400, 700);
    REQUIRE(pairs.size() == 5);
    const long expected[] = {409, 449, 521, 569, 641};
    for (int i = 0; i < 5; ++i) CHECK(pairs[i].p == expected[i]);

    CHECK(scan(2, 100).empty());
    CHECK(scan(410, 440).empty());
    CHECK_THROWS_AS(scan(10, 2), std::invalid_argument);
}

TEST_CASE("scan agrees with the trial-division oracle") {
    auto lib = scan(2, 700);
    auto ref = oracle::family_scan_oracle(2, 700);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i)
        CHECK(lib[i].p == Int(static_cast<unsigned long>(ref[i])));
}

TEST_CASE("family pair identities") {
    for (const auto& pair : scan(2, 700)) {
        auto v = validate(pair.p);
        REQUIRE(std::holds_alternative<FamilyPair>(v));
        CHECK(std::get<FamilyPair>(v) == pair);
        // 2q = p^2 + 1 gives p^2 = -1 (mod q) and 2q = 1 (mod p)
        CHECK(arith::mod_reduce(pair.p * pair.p + 1, pair.q) == 0);
        CHECK(arith::mod_reduce(2 * pair.q - 1, pair.p) == 0);
        CHECK(arith::mod_reduce(pair.q, 8) == 1);
    }
}

TEST_CASE("curve parameters") {
    CurveParams c = curve_of(FamilyPair{409, 83641});
    CHECK(c.roots == std::array<Int, 3>{0, 1, -167281});
    CHECK(curve_of(FamilyPair{449, 100801}).roots[2] == -201601);
    CHECK(curve_of(FamilyPair{521, 135721}).roots[2] == -271441);

    // the discriminant support of x(x-1)(x+p^2) is {2, p, q}
    FamilyPair pair{409, 83641};
    Int disc = Int(1) * (0 - 1) * (0 - 1) * (0 + 167281) * (0 + 167281) * (1 + 167281) *
               (1 + 167281);
    disc = abs(disc);
    for (const Int& f : {Int(2), pair.p, pair.q})
        while (arith::mod_reduce(disc, f) == 0) disc /= f;
    CHECK(disc == 1);
}
