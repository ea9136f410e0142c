// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <array>
#include <variant>
#include <vector>

#include "heron/arith.hpp"

namespace heron::family {

// A prime p = 1 (mod 8) with q = (p^2+1)/2 also prime.  Every descent in
// this tool is run against such a pair.
struct FamilyPair {
    Int p;
    Int q;
    bool operator==(const FamilyPair&) const = default;
};

enum class Rejection { not_prime, wrong_residue_mod_8, q_not_prime };

const char* to_string(Rejection r);

// Checks the three hypothesis conditions; rejections are values, not errors,
// so a scan over millions of candidates stays cheap.
std::variant<FamilyPair, Rejection> validate(const Int& p);

// All family pairs with lo <= p <= hi, ascending.  Iterates p = 1 (mod 8)
// only and tests p before q (q ~ p^2/2 is the expensive primality check).
std::vector<FamilyPair> scan(const Int& lo, const Int& hi);

// y^2 = x(x-1)(x+p^2); roots of the cubic are (0, 1, -p^2).
struct CurveParams {
    std::array<Int, 3> roots;
    Int p;
};

CurveParams curve_of(const FamilyPair& pair);

}  // namespace heron::family
