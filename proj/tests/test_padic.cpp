// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heron/padic.hpp"

using namespace heron;
using namespace heron::padic;
using arith::int_pow;
using arith::mod_reduce;

TEST_CASE("valuation fixtures") {
    CHECK(valuation(3, Rat(18)) == 2);
    CHECK(valuation(2, Rat(5, 8)) == -3);
    CHECK(valuation(7, Rat(10)) == 0);
    CHECK_THROWS_AS(valuation(3, Rat(0)), std::invalid_argument);
}

TEST_CASE("valuation is additive") {
    std::mt19937_64 rng(2024);
    const Int primes[] = {2, 3, 5, 7, 11};
    for (int i = 0; i < 300; ++i) {
        const Int& l = primes[rng() % 5];
        Rat x(Int(static_cast<long>(1 + rng() % 5000)), Int(static_cast<long>(1 + rng() % 5000)));
        Rat y(Int(static_cast<long>(1 + rng() % 5000)), Int(static_cast<long>(1 + rng() % 5000)));
        x.canonicalize();
        y.canonicalize();
        CHECK(valuation(l, x * y) == valuation(l, x) + valuation(l, y));
    }
}

TEST_CASE("decompose reconstructs the input") {
    auto v = decompose(3, Rat(18), 4);
    CHECK(v.val == 2);
    CHECK(v.unit.modulus == int_pow(3, 4));
    // l^val * unit reproduces the input modulo l^(val + N)
    CHECK(mod_reduce(v.unit.value * 9 - 18, int_pow(3, 6)) == 0);

    auto w = decompose(5, Rat(7, 50), 3);
    CHECK(w.val == -2);
    Rat recon = Rat(w.unit.value) / Rat(25);
    Rat diff = recon - Rat(7, 50);
    CHECK((diff == 0 || valuation(5, diff) >= -2 + 3));
}

TEST_CASE("local square fixtures") {
    CHECK(is_square_in_Ql(Place::at(7), Rat(2)));       // 3^2 = 9 = 2 (mod 7)
    CHECK(is_square_in_Ql(Place::at(2), Rat(17)));      // 17 = 1 (mod 8)
    CHECK_FALSE(is_square_in_Ql(Place::infinity(), Rat(-4)));
    CHECK(is_square_in_Ql(Place::infinity(), Rat(3)));
    CHECK_FALSE(is_square_in_Ql(Place::at(2), Rat(3)));
    CHECK_FALSE(is_square_in_Ql(Place::at(2), Rat(2)));
    CHECK(is_square_in_Ql(Place::at(2), Rat(4)));
    CHECK(is_square_in_Ql(Place::at(5), Rat(1, 5) * Rat(1, 5)));
    CHECK_THROWS_AS(is_square_in_Ql(Place::at(5), Rat(0)), std::invalid_argument);
}

TEST_CASE("local squares are square-class invariant") {
    std::mt19937_64 rng(555);
    const Int primes[] = {2, 3, 5, 7, 409};
    for (int i = 0; i < 300; ++i) {
        const Int& l = primes[rng() % 5];
        long u = static_cast<long>(rng() % 4000) - 2000;
        if (u == 0) u = 1;
        long x = 1 + static_cast<long>(rng() % 1000);
        Rat base(u);
        Rat scaled = base * Rat(Int(x) * Int(x));
        CHECK(is_square_in_Ql(Place::at(l), base) == is_square_in_Ql(Place::at(l), scaled));
    }
}

TEST_CASE("hensel_lift_root fixtures") {
    Poly f{-2, 0, 1};  // x^2 - 2
    CHECK(hensel_lift_root(f, 7, 3, 2).value == 10);  // 10^2 = 100 = 2 + 2*49

    auto r4 = hensel_lift_root(f, 7, 3, 4);
    CHECK(r4.value == 2166);  // frozen from the oracle run
    CHECK(mod_reduce(r4.value * r4.value - 2, int_pow(7, 4)) == 0);

    Poly g{1, 0, 1};  // x^2 + 1
    auto r409 = hensel_lift_root(g, 409, 143, 3);
    CHECK(mod_reduce(r409.value, Int(409)) == 143);
    CHECK(mod_reduce(r409.value * r409.value + 1, int_pow(409, 3)) == 0);

    Poly h2{-6, 1, 1};  // x^2 + x - 6 = (x + 3)(x - 2): the odd branch lifts to -3
    auto r2 = hensel_lift_root(h2, 2, 1, 8);
    CHECK(r2.value == 253);  // -3 mod 2^8
    CHECK(mod_reduce(poly_eval(h2, r2.value), int_pow(2, 8)) == 0);

    CHECK_THROWS_AS(hensel_lift_root(f, 7, 1, 2), precondition_error);  // f(1) != 0 (mod 7)
    Poly h{-4, 0, 1};                                                   // x^2 - 4
    CHECK_THROWS_AS(hensel_lift_root(h, 2, 0, 3), precondition_error);  // f'(0) = 0 (mod 2)
}

TEST_CASE("lift certificates for the distinguished systems") {
    // (b1, b2) = (p, 1) with p = 409 at l = p, content-reduced pair:
    //   409 z1^2 - z2^2 = 1  and  z1^2 - z3^2 = -409
    QuadricSystem sys{DiagonalQuadric{{409, -1, 0}, 1}, DiagonalQuadric{{1, 0, -1}, -409}};
    auto cert = lift_certificate(sys, 409, {1, 143, 1}, 1);
    CHECK(cert.liftable);
    REQUIRE(cert.jacobian_valuation.has_value());
    CHECK(*cert.jacobian_valuation == 0);

    // p = 449 = 2 (mod 3): (1, 1, 0) solves the same pair mod 3
    QuadricSystem sys3{DiagonalQuadric{{449, -1, 0}, 1}, DiagonalQuadric{{1, 0, -1}, -449}};
    auto cert3 = lift_certificate(sys3, 3, {1, 1, 0}, 1);
    CHECK(cert3.liftable);
    CHECK(*cert3.jacobian_valuation == 0);

    CHECK_THROWS_AS(lift_certificate(sys, 409, {0, 0, 0}, 1), precondition_error);
    CHECK_THROWS_AS(lift_certificate(sys, 409, {1, 1, 1}, 1), precondition_error);
}

namespace {

struct Planted {
    QuadricSystem sys;
    Int l;
    std::array<Int, 3> solution;
};

// random diagonal systems with a planted exact integer solution
Planted plant(std::mt19937_64& rng) {
    const long primes[] = {2, 3, 5, 7, 11, 13};
    Int l(primes[rng() % 6]);
    std::array<Int, 3> z{Int(static_cast<long>(rng() % 50)), Int(static_cast<long>(rng() % 50)),
                         Int(static_cast<long>(rng() % 50))};
    if (z[0] == 0 && z[1] == 0 && z[2] == 0) z[0] = 1;
    auto coeff = [&]() { return Int(static_cast<long>(rng() % 19) - 9); };
    DiagonalQuadric a{{coeff(), coeff(), coeff()}, 0};
    DiagonalQuadric b{{coeff(), coeff(), coeff()}, 0};
    a.rhs = a.c[0] * z[0] * z[0] + a.c[1] * z[1] * z[1] + a.c[2] * z[2] * z[2];
    b.rhs = b.c[0] * z[0] * z[0] + b.c[1] * z[1] * z[1] + b.c[2] * z[2] * z[2];
    return {{a, b}, l, z};
}

}  // namespace

TEST_CASE("liftable certificates refine and stay liftable") {
    std::mt19937_64 rng(99001);
    int refined = 0;
    while (refined < 40) {
        Planted pl = plant(rng);
        if (mod_reduce(pl.solution[0], pl.l) == 0 && mod_reduce(pl.solution[1], pl.l) == 0 &&
            mod_reduce(pl.solution[2], pl.l) == 0)
            continue;
        int n0 = 3;
        Int m0 = int_pow(pl.l, n0);
        std::array<Int, 3> approx{mod_reduce(pl.solution[0], m0), mod_reduce(pl.solution[1], m0),
                                  mod_reduce(pl.solution[2], m0)};
        LiftCertificate cert;
        try {
            cert = lift_certificate(pl.sys, pl.l, approx, n0);
        } catch (const precondition_error&) {
            continue;
        }
        if (!cert.liftable) continue;
        ++refined;

        long k = *cert.jacobian_valuation;
        auto better = refine_system_solution(pl.sys, pl.l, approx, n0, n0 + 2);
        auto cert2 = lift_certificate(pl.sys, pl.l, better, n0 + 2);
        CHECK(cert2.liftable);
        CHECK(*cert2.jacobian_valuation == k);
        // the refinement stays on the original residue branch
        for (int i = 0; i < 3; ++i) CHECK(mod_reduce(better[i] - approx[i], pl.l) == 0);
    }
}

TEST_CASE("sqrt_in_Zl") {
    // odd prime
    auto r = sqrt_in_Zl(Rat(2), 7, 5);
    REQUIRE(r.has_value());
    CHECK(mod_reduce(*r * *r - 2, int_pow(7, 5)) == 0);
    CHECK_FALSE(sqrt_in_Zl(Rat(3), 7, 4).has_value());

    // even valuation with unit part
    auto r2 = sqrt_in_Zl(Rat(2 * 2 * 2 * 2 * 3 * 3), 2, 6);
    REQUIRE(r2.has_value());
    CHECK(mod_reduce(*r2 * *r2 - 144, int_pow(2, 6 + 4)) == 0);

    // 2-adic unit square
    auto r3 = sqrt_in_Zl(Rat(17), 2, 10);
    REQUIRE(r3.has_value());
    CHECK(mod_reduce(*r3 * *r3 - 17, int_pow(2, 10)) == 0);
    CHECK_FALSE(sqrt_in_Zl(Rat(3), 2, 6).has_value());
    CHECK_FALSE(sqrt_in_Zl(Rat(12), 2, 6).has_value());  // odd valuation
    CHECK_FALSE(sqrt_in_Zl(Rat(1, 7), 7, 4).has_value());  // negative valuation

    // rational with denominator prime to l
    auto r4 = sqrt_in_Zl(Rat(2, 9), 7, 6);
    REQUIRE(r4.has_value());
    Rat lhs = Rat(*r4) * Rat(*r4) - Rat(2, 9);
    CHECK((lhs == 0 || valuation(7, lhs) >= 6));
}
