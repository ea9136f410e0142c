// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "heron/errors.hpp"

namespace heron {

using Int = mpz_class;
using Rat = mpq_class;

namespace arith {

// A fully reduced residue: 0 <= value < modulus, modulus >= 2.
struct Residue {
    Int value;
    Int modulus;

    Residue(Int v, Int m);
    bool operator==(const Residue&) const = default;
};

// Remainder in [0, m), also for negative a.
Int mod_reduce(const Int& a, const Int& m);

// base^exponent mod modulus via binary exponentiation. exponent >= 0, modulus >= 2.
Residue mod_pow(const Int& base, const Int& exponent, const Int& modulus);

// Jacobi symbol (a/n) for odd n >= 3; equals the Legendre symbol for prime n.
int jacobi(const Int& a, const Int& n);

// Square root of a mod an odd prime l (Tonelli-Shanks).
//   (a/l) = 1  -> the canonical root in [1, (l-1)/2]
//   l | a      -> 0
//   (a/l) = -1 -> nullopt
std::optional<Residue> sqrt_mod_prime(const Int& a, const Int& l);

// Deterministic Miller-Rabin below 3.3e24 (witness set {2,...,37}, per
// Sorenson-Webster); beyond that, 64 fixed extra bases keep the error
// probability below 2^-128.
bool is_prime(const Int& n);

// l-adic valuation of a nonzero integer.
long valuation_int(const Int& l, const Int& x);

Int int_pow(const Int& base, unsigned long e);

// ---- fixed-width helpers (internal fast paths) ----

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m);
int jacobi64(std::uint64_t a, std::uint64_t n);  // n odd
bool is_prime_u64(std::uint64_t n);

std::uint64_t isqrt_u128(unsigned __int128 n);
bool is_square_u128(unsigned __int128 n, std::uint64_t* root = nullptr);

}  // namespace arith
}  // namespace heron
