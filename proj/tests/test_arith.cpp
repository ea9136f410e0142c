// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heron/arith.hpp"
#include "oracles.hpp"

using namespace heron;
using namespace heron::arith;

TEST_CASE("mod_pow fixtures") {
    CHECK(mod_pow(2, 10, 1000).value == 24);
    CHECK(mod_pow(5, 0, 7).value == 1);
    CHECK(mod_pow(3, 100, 101).value == 1);  // 101 prime, exponent 100 = 101 - 1
    CHECK(mod_pow(-2, 3, 7).value == mod_reduce(-8, 7));
    CHECK_THROWS_AS(mod_pow(2, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(mod_pow(2, -1, 7), std::invalid_argument);
}

TEST_CASE("mod_pow exponent additivity") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 200; ++i) {
        Int a = Int(static_cast<unsigned long>(rng() % 1000000));
        Int e1 = Int(static_cast<unsigned long>(rng() % 500));
        Int e2 = Int(static_cast<unsigned long>(rng() % 500));
        Int m = Int(static_cast<unsigned long>(2 + rng() % 99998));
        Int lhs = mod_pow(a, e1 + e2, m).value;
        Int rhs = mod_reduce(mod_pow(a, e1, m).value * mod_pow(a, e2, m).value, m);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("jacobi fixtures") {
    CHECK(jacobi(-1, 409) == 1);  // 409 = 1 (mod 8), so -1 is a residue
    CHECK(jacobi(0, 9) == 0);
    CHECK(jacobi(2, 17) == 1);  // 6^2 = 36 = 2 (mod 17)
    CHECK_THROWS_AS(jacobi(3, 8), std::invalid_argument);
    CHECK_THROWS_AS(jacobi(3, 1), std::invalid_argument);
}

TEST_CASE("jacobi multiplicativity") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 300; ++i) {
        Int a = Int(static_cast<long>(rng() % 2000)) - 1000;
        Int b = Int(static_cast<long>(rng() % 2000)) - 1000;
        Int n = Int(static_cast<unsigned long>(3 + 2 * (rng() % 5000)));
        CHECK(jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n));
    }
}

TEST_CASE("sqrt_mod_prime fixtures") {
    auto r1 = sqrt_mod_prime(2, 17);
    REQUIRE(r1.has_value());
    CHECK(r1->value == 6);

    // canonical root of -1 mod 409, cross-checked against the exhaustive scan
    auto r2 = sqrt_mod_prime(-1, 409);
    REQUIRE(r2.has_value());
    CHECK(r2->value == 143);
    auto scan = oracle::sqrt_scan(408, 409);
    REQUIRE(scan.has_value());
    CHECK(Int(static_cast<unsigned long>(*scan)) == r2->value);

    // squares mod 7 are {0, 1, 2, 4}: no root of 3
    CHECK_FALSE(sqrt_mod_prime(3, 7).has_value());
    CHECK(sqrt_mod_prime(0, 7)->value == 0);
    CHECK(sqrt_mod_prime(14, 7)->value == 0);

    CHECK_THROWS_AS(sqrt_mod_prime(2, 15), std::invalid_argument);
}

TEST_CASE("sqrt_mod_prime agrees with the scan oracle") {
    std::mt19937_64 rng(99);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t l = 3; l < 1000; l += 2)
        if (oracle::trial_division_is_prime(l)) primes.push_back(l);
    for (int i = 0; i < 400; ++i) {
        std::uint64_t l = primes[rng() % primes.size()];
        std::uint64_t a = rng() % l;
        auto lib = sqrt_mod_prime(Int(static_cast<unsigned long>(a)), Int(static_cast<unsigned long>(l)));
        auto ref = oracle::sqrt_scan(a, l);
        CHECK(lib.has_value() == ref.has_value());
        if (lib && ref) {
            CHECK(lib->value == Int(static_cast<unsigned long>(*ref)));
            CHECK(mod_reduce(lib->value * lib->value, Int(static_cast<unsigned long>(l))) ==
                  Int(static_cast<unsigned long>(a)));
            CHECK(lib->value <= Int(static_cast<unsigned long>((l - 1) / 2)));
        }
    }
}

TEST_CASE("is_prime fixtures") {
    CHECK(is_prime(409));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(83641));  // (409^2 + 1) / 2
    CHECK_FALSE(is_prime(0));
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(Int("3215031751")));  // strong pseudoprime to bases 2,3,5,7
    CHECK(is_prime(Int("2305843009213693951")));  // 2^61 - 1
}

TEST_CASE("is_prime agrees with a sieve below 10^6") {
    const std::uint64_t N = 1000000;
    std::vector<bool> composite(N + 1, false);
    for (std::uint64_t i = 2; i * i <= N; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= N; j += i) composite[j] = true;
    for (std::uint64_t n = 1; n <= N; ++n) {
        bool expect = n >= 2 && !composite[n];
        if (is_prime_u64(n) != expect) {
            CAPTURE(n);
            REQUIRE(is_prime_u64(n) == expect);
        }
    }
    // spot-check the arbitrary-precision entry point on a sample
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = 1 + rng() % N;
        CHECK(is_prime(Int(static_cast<unsigned long>(n))) == (n >= 2 && !composite[n]));
    }
}

TEST_CASE("valuation_int and int_pow") {
    CHECK(valuation_int(3, 18) == 2);
    CHECK(valuation_int(2, 40) == 3);
    CHECK(valuation_int(7, 10) == 0);
    CHECK_THROWS_AS(valuation_int(3, 0), std::invalid_argument);
    CHECK(int_pow(Int(3), 5) == 243);
}

TEST_CASE("u128 square detection") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t r = rng() % 3000000000ull;
        unsigned __int128 sq = static_cast<unsigned __int128>(r) * r;
        std::uint64_t root = 0;
        CHECK(is_square_u128(sq, &root));
        CHECK(root == r);
        // n^2 + 1 and n^2 - 1 are squares only for n <= 1
        if (r > 1) {
            CHECK_FALSE(is_square_u128(sq + 1, nullptr));
            CHECK_FALSE(is_square_u128(sq - 1, nullptr));
        }
    }
}
