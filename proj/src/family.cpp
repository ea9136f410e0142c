// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/family.hpp"

namespace heron::family {

const char* to_string(Rejection r) {
    switch (r) {
        case Rejection::not_prime: return "not-prime";
        case Rejection::wrong_residue_mod_8: return "wrong-residue-mod-8";
        case Rejection::q_not_prime: return "q-not-prime";
    }
    return "?";
}

std::variant<FamilyPair, Rejection> validate(const Int& p) {
    if (!arith::is_prime(p)) return Rejection::not_prime;
    if (arith::mod_reduce(p, 8) != 1) return Rejection::wrong_residue_mod_8;
    Int q = (p * p + 1) / 2;
    if (!arith::is_prime(q)) return Rejection::q_not_prime;
    return FamilyPair{p, q};
}

std::vector<FamilyPair> scan(const Int& lo, const Int& hi) {
    if (lo > hi) throw std::invalid_argument("scan: lo > hi");
    std::vector<FamilyPair> out;
    Int start = lo < 2 ? Int(2) : lo;
    // first candidate >= start that is 1 (mod 8)
    Int c = start + arith::mod_reduce(1 - start, 8);
    for (; c <= hi; c += 8) {
        if (!arith::is_prime(c)) continue;
        Int q = (c * c + 1) / 2;
        if (arith::is_prime(q)) out.push_back(FamilyPair{c, q});
    }
    return out;
}

CurveParams curve_of(const FamilyPair& pair) {
    return CurveParams{{Int(0), Int(1), Int(-pair.p * pair.p)}, pair.p};
}

}  // namespace heron::family
