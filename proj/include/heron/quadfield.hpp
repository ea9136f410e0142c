// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <string>

#include "heron/family.hpp"

namespace heron::quadfield {

using family::FamilyPair;

struct RealQuadraticField {
    Int d;             // squarefree, > 1
    Int discriminant;  // d when d = 1 (mod 4), else 4d
};

RealQuadraticField field_of(const Int& d);

bool is_squarefree(const Int& d);

// Minimal positive solution of x^2 - d y^2 = +-1 via the continued fraction
// of sqrt(d); its norm sign equals the norm of the fundamental unit of the
// maximal order (the Pell unit is an odd power of it).
struct PellSolution {
    Int x, y;
    int norm;  // +1 or -1
};

PellSolution fundamental_unit(const Int& d);

// Wide and narrow class numbers from the cycle structure of reduced
// indefinite binary quadratic forms of the field discriminant.
struct ClassNumberCertificate {
    Int d;
    Int h;         // wide
    Int h_narrow;  // narrow = number of form cycles
    int unit_norm;
    std::string method;
};

ClassNumberCertificate class_number(const Int& d);

// The computable inputs to the rational-point obstruction for the two
// distinguished classes (p,1) and (1,q): h(Q(sqrt 2)) = 1 and h(Q(sqrt p))
// odd.  When both hold, those homogeneous spaces have no rational points.
struct ObstructionCertificate {
    ClassNumberCertificate h_sqrt2;
    ClassNumberCertificate h_sqrtp;
};

ObstructionCertificate class_number_obstruction(const FamilyPair& pair);

}  // namespace heron::quadfield
