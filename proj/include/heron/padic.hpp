// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heron/arith.hpp"

namespace heron::padic {

using arith::Residue;

// A place of Q: a finite prime or the real place.
struct Place {
    bool is_infinite = false;
    Int prime = 0;

    static Place infinity() { return Place{true, 0}; }
    static Place at(Int l) { return Place{false, std::move(l)}; }

    bool operator==(const Place&) const = default;
    auto operator<=>(const Place& o) const {
        if (is_infinite != o.is_infinite) return is_infinite <=> o.is_infinite;
        return cmp(prime, o.prime) <=> 0;
    }
};

std::string to_string(const Place& pl);

// Precision requests are capped here; exceeding the cap is an error, never a
// silent truncation.
inline constexpr int kMaxPrecision = 64;

// v_l(x) = v_l(numerator) - v_l(denominator).
long valuation(const Int& l, const Rat& x);

// x = l^valuation * unit with the unit known mod l^N.
struct ValuedRational {
    Int l;
    long val;
    Residue unit;
};

ValuedRational decompose(const Int& l, const Rat& x, int precision);

// Local square test: odd l needs even valuation and a residue unit; l = 2
// needs even valuation and unit = 1 (mod 8); the real place needs x > 0.
bool is_square_in_Ql(const Place& pl, const Rat& x);

// Polynomials as ascending coefficient vectors.
using Poly = std::vector<Int>;

Int poly_eval(const Poly& f, const Int& x);
Poly poly_derivative(const Poly& f);

// Simple-root Newton lift: from f(x1) = 0 (mod l), f'(x1) != 0 (mod l) to a
// root mod l^N.  Quadratic convergence.
Residue hensel_lift_root(const Poly& f, const Int& l, const Int& x1, int target_precision);

// c1*z1^2 + c2*z2^2 + c3*z3^2 = rhs
struct DiagonalQuadric {
    std::array<Int, 3> c;
    Int rhs;

    Int residual(const std::array<Int, 3>& z) const;
    // divide out the integer content shared by all coefficients and the rhs
    DiagonalQuadric primitive_part() const;
    std::string to_string() const;
};

struct QuadricSystem {
    DiagonalQuadric a, b;
};

// Quantitative multivariate Hensel data for a two-quadric system in three
// unknowns.  jacobian_valuation is the minimum l-adic valuation k over the
// three 2x2 minors of the Jacobian at the approximation; the approximation
// lifts to an exact Z_l solution once the known precision N satisfies
// N >= 2k+1 (two-variable Newton with the third coordinate frozen).
struct LiftCertificate {
    Int l;
    int precision = 0;
    std::optional<long> jacobian_valuation;  // nullopt: all minors vanish to precision
    bool liftable = false;
};

LiftCertificate lift_certificate(const QuadricSystem& sys, const Int& l,
                                 const std::array<Int, 3>& approx, int precision);

// One or more Newton steps taking a certified approximation from precision N
// to at least target_precision.
std::array<Int, 3> refine_system_solution(const QuadricSystem& sys, const Int& l,
                                          std::array<Int, 3> approx, int precision,
                                          int target_precision);

// Exact square root in Z_l of a rational a with v_l(a) even and >= 0 and
// square unit part.  Returns x with x^2 = a (mod l^(v + unit_precision)),
// v(x) = v/2; deterministic canonical choice of root.
std::optional<Int> sqrt_in_Zl(const Rat& a, const Int& l, int unit_precision);

}  // namespace heron::padic
