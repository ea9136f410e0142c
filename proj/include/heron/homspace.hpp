// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "heron/family.hpp"
#include "heron/padic.hpp"

namespace heron::homspace {

using family::FamilyPair;
using padic::DiagonalQuadric;
using padic::LiftCertificate;
using padic::Place;
using padic::QuadricSystem;

// An element of Q(S,2) for S = {2, p, q}: a sign bit and exponent bits for
// 2, p, q.  Multiplication is bitwise xor; every element squares to 1.
struct SquareClass {
    // bit 3: sign, bit 2: exponent of 2, bit 1: exponent of p, bit 0: exponent of q
    std::uint8_t bits = 0;

    static SquareClass one() { return {0}; }
    static SquareClass minus_one() { return {8}; }
    static SquareClass two() { return {4}; }
    static SquareClass p_class() { return {2}; }
    static SquareClass q_class() { return {1}; }
    static SquareClass two_q() { return {5}; }

    bool negative() const { return bits & 8; }
    bool even() const { return bits & 4; }       // 2 | representative
    bool has_p() const { return bits & 2; }
    bool has_q() const { return bits & 1; }

    SquareClass operator*(SquareClass o) const { return {static_cast<std::uint8_t>(bits ^ o.bits)}; }
    bool operator==(const SquareClass&) const = default;
    auto operator<=>(const SquareClass&) const = default;

    // signed squarefree representative, e.g. -2pq -> -2*p*q
    Int value(const FamilyPair& fam) const;

    // p-independent rendering: "1", "-2pq", "q", ...
    std::string render() const;
    static std::optional<SquareClass> parse(std::string_view s);

    // class of a nonzero integer supported on {-1, 2, p, q} times a square
    static std::optional<SquareClass> from_integer(const Int& n, const FamilyPair& fam);
};

// A pair (b1, b2) naming one homogeneous space.
struct DescentPair {
    SquareClass b1, b2;

    DescentPair operator*(const DescentPair& o) const { return {b1 * o.b1, b2 * o.b2}; }
    bool operator==(const DescentPair&) const = default;
    auto operator<=>(const DescentPair&) const = default;

    bool is_torsion_image() const;  // member of A = {(1,1),(-1,-1),(1,2q),(-1,-2q)}
    std::string render() const;
};

// The four classes hit by the rational 2-torsion.
std::array<DescentPair, 4> torsion_classes();

// Canonical representative of the A-coset: b2 odd; both entries positive when
// b1*b2 > 0; otherwise the smaller bit encoding (such classes die at the real
// place, so the choice is immaterial).
DescentPair normalize_coset(const DescentPair& pair);

// The homogeneous space attached to (b1, b2):
//   b1 z1^2 - b2 z2^2    = 1
//   b1 z1^2 - b1 b2 z3^2 = -p^2
// with the implied difference equation b2 z2^2 - b1 b2 z3^2 = -2q.
struct HomogeneousSpace {
    DescentPair pair;
    FamilyPair fam;

    Int b1() const { return pair.b1.value(fam); }
    Int b2() const { return pair.b2.value(fam); }
};

// The integral model at scaling depth k (solutions with all valuations -k
// clear denominators):  rhs values scale by l^(2k).
struct ScaledSystem {
    int depth = 0;
    DiagonalQuadric q1, q2, q3;  // q3 = q2 - q1
};

ScaledSystem scaled_system(const HomogeneousSpace& space, const Int& l, int depth);

// Applies the valuation normalization to a candidate solution: all
// valuations nonnegative (k = 0), or all equal to -k < 0; mixed negative
// patterns are rejected.
struct NormalizedCandidate {
    ScaledSystem system;
    std::array<Rat, 3> scaled;  // l^k * z, l-integral
};

NormalizedCandidate normalize_valuations(const HomogeneousSpace& space, const Int& l,
                                         const std::array<Rat, 3>& z);

// Both defining equations have real points exactly when the signs agree.
bool real_solvable(const HomogeneousSpace& space);

// ---- local witnesses ----

struct RealSignEvidence {
    int sign_b1 = 0, sign_b2 = 0;
};

// A residue triple together with a lift certificate for the stated pair of
// (content-reduced) equations, at the stated scaling depth.
struct PointEvidence {
    int depth = 0;
    std::array<Int, 3> triple;
    int precision = 0;
    LiftCertificate certificate;
    std::string eq_a, eq_b;
};

struct ExhaustionEvidence {
    int precision_cap = 0;
    std::vector<int> depths_tried;
    std::uint64_t nodes_examined = 0;
    std::uint64_t undecided_at_cap = 0;
    bool infinity_class_checked = false;
};

struct RuleEvidence {
    std::string rule;
};

using Evidence = std::variant<RealSignEvidence, PointEvidence, ExhaustionEvidence, RuleEvidence>;

struct LocalWitness {
    Place place;
    bool solvable = false;
    Evidence evidence;
};

// Certified residue search at a finite prime: scaling depths 0..2, residue
// tree capped at N* = 2 v_l(2 b1 b2 p q) + 3, witnesses certified through
// the quantitative Hensel criterion.  A points-at-infinity check (b1 and b2
// both local squares) backstops the affine search.
LocalWitness locally_solvable_generic(const HomogeneousSpace& space, const Int& l);

// Closed-form case analysis: the real place, the divisibility exclusions,
// the two distinguished classes and the torsion classes.  Everything else is
// not covered.
enum class RuleVerdict { solvable, unsolvable, not_covered };

struct RuleResult {
    RuleVerdict verdict = RuleVerdict::not_covered;
    std::string rule;
};

RuleResult locally_solvable_rules(const HomogeneousSpace& space, const Place& place);

struct SolverOptions {
    long sanity_bound = 100;
};

// Decisive places {inf, 2, 3, p, q} via both solvers (agreement enforced)
// plus a sanity sweep over good primes in [5, sanity_bound].
struct EverywhereResult {
    bool all_solvable = false;
    std::vector<LocalWitness> witnesses;
};

EverywhereResult everywhere_locally_solvable(const HomogeneousSpace& space,
                                             const SolverOptions& opts = {});

// Exact projective point count of the quadric intersection over F_l for a
// good prime l >= 5 (l not dividing 2 p q b1 b2).
long count_points_Fl(const HomogeneousSpace& space, const Int& l);

// Exhaustive primitive search on the integral model
//   b1 a1^2 - b2 a2^2 = d^2,  b1 a1^2 - b1 b2 a3^2 = -p^2 d^2
// over 0 <= a1 <= H, 1 <= d <= H (sign symmetries quarter the space).
struct RationalSearchResult {
    long bound = 0;
    std::optional<std::array<Int, 4>> hit;  // (a1, a2, a3, d)
};

RationalSearchResult rational_point_search(const HomogeneousSpace& space, long height_bound);

}  // namespace heron::homspace
