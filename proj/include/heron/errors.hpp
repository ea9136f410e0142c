// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <stdexcept>
#include <string>

namespace heron {

// A stated precondition of an operation does not hold; the message names
// the offending congruence or condition.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Two independent computations of the same fact disagree.  This is always
// an implementation bug, never a mathematical outcome.
struct internal_inconsistency : std::logic_error {
    explicit internal_inconsistency(const std::string& what) : std::logic_error(what) {}
};

// A certificate's numeric hypotheses failed to verify.
struct certificate_error : std::runtime_error {
    explicit certificate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heron
