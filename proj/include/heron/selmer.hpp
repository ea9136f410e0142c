// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heron/homspace.hpp"
#include "heron/quadfield.hpp"

namespace heron::selmer {

using family::FamilyPair;
using homspace::DescentPair;
using homspace::LocalWitness;
using homspace::SquareClass;

// Q(S,2) for S = {2, p, q}: sixteen square classes.
std::array<SquareClass, 16> square_class_group(const FamilyPair& pair);

struct TorsionImage {
    std::array<DescentPair, 4> classes;
};

TorsionImage torsion_image(const FamilyPair& pair);

// Canonical A-coset representative (b2 odd; both positive when b1 b2 > 0).
DescentPair normalize_pair(const DescentPair& pair, const TorsionImage& image);

struct SelmerGroup {
    std::vector<DescentPair> members;  // sorted by encoding
    int rank = 0;                      // s with |Sel| = 2^(2+s)
};

struct SelmerComputation {
    SelmerGroup group;
    std::map<DescentPair, std::vector<LocalWitness>> witnesses;
};

// Local solvability of all 256 pairs (torsion classes by convention), plus
// the subgroup sanity check.
SelmerComputation compute_selmer(const FamilyPair& pair, const homspace::SolverOptions& opts = {});

// The group generated by the torsion image together with (p,1) and (1,q):
// the outcome predicted for every family pair.
std::vector<DescentPair> expected_selmer_members(const FamilyPair& pair);

struct TorsionPoint {
    bool at_infinity = false;
    Int x = 0, y = 0;
};

struct TorsionCheck {
    std::vector<TorsionPoint> points;              // O and the three 2-torsion points
    std::vector<std::pair<Int, long>> curve_counts;  // (l, #E(F_l)) over good primes
    Int counts_gcd = 0;
};

// The full rational 2-torsion plus the point-count corroboration that no
// larger torsion exists (gcd of #E(F_l) over good primes equals 4).
TorsionCheck torsion_subgroup(const FamilyPair& pair);

struct CurvePoint {
    Rat x, y;
    bool torsion = false;
};

// Naive-height search for rational points: x = m/e^2 with |m|, e <= H,
// gcd(m, e) = 1, y read off exactly when the cubic value is a square.
std::vector<CurvePoint> mw_point_search(const FamilyPair& pair, long height_bound);

struct Bounds {
    long curve_bound = 1000;
    long space_bound = 10000;
    long sanity_bound = 100;
};

enum class Status { confirmed, violation };

struct DescentReport {
    FamilyPair pair;
    SelmerComputation selmer;
    TorsionCheck torsion;
    int torsion_order = 4;
    std::optional<quadfield::ObstructionCertificate> obstruction;
    homspace::RationalSearchResult search_p1, search_1q;
    std::vector<CurvePoint> mw_points_found;  // non-torsion hits (expected empty)
    Bounds bounds;
    std::optional<int> rank;
    std::optional<int> sha2_dimension;
    Status status = Status::violation;
    std::vector<std::string> violations;
};

// Full descent: Selmer group, torsion, class-number obstruction, negative
// searches, and the rank / sha conclusion.  Deviations from the predicted
// outcome produce a violation report carrying the evidence, not a crash.
DescentReport conclude(const FamilyPair& pair, const Bounds& bounds = {});

}  // namespace heron::selmer
