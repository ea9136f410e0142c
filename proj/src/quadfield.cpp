// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/quadfield.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace heron::quadfield {

using arith::mod_reduce;

bool is_squarefree(const Int& d) {
    if (d < 1) return false;
    Int m = d;
    for (Int f = 2; f * f <= m; ++f) {
        if (mod_reduce(m, f) != 0) continue;
        m /= f;
        if (mod_reduce(m, f) == 0) return false;
    }
    return true;
}

RealQuadraticField field_of(const Int& d) {
    if (d <= 1 || !is_squarefree(d)) throw std::invalid_argument("field_of: d must be squarefree > 1");
    Int disc = mod_reduce(d, 4) == 1 ? d : 4 * d;
    return RealQuadraticField{d, disc};
}

PellSolution fundamental_unit(const Int& d) {
    if (d <= 1 || !is_squarefree(d)) throw std::invalid_argument("fundamental_unit: d must be squarefree > 1");

    Int a0;
    mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());

    // continued fraction of sqrt(d); period ends at the first a_k = 2 a0
    Int m = 0, den = 1, a = a0;
    Int h_prev = 1, h = a0;  // numerators
    Int k_prev = 0, k = 1;   // denominators
    long period = 0;
    for (;;) {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        ++period;
        if (a == 2 * a0) break;
        Int h_next = a * h + h_prev;
        Int k_next = a * k + k_prev;
        h_prev = h; h = h_next;
        k_prev = k; k = k_next;
    }
    int norm = (period % 2 == 0) ? 1 : -1;
    if (h * h - d * k * k != norm)
        throw internal_inconsistency("fundamental_unit: Pell identity failed");
    return PellSolution{h, k, norm};
}

namespace {

// indefinite form (a, b, c) of discriminant D = b^2 - 4ac > 0.
// Reduced means 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
using Form = std::tuple<Int, Int, Int>;

bool below_sqrt(const Int& x, const Int& D) {
    // x < sqrt(D) for integer x (D is never a perfect square here)
    if (x < 0) return true;
    return x * x < D;
}

std::vector<Int> divisors(const Int& n) {
    std::vector<Int> small, large;
    for (Int f = 1; f * f <= n; ++f) {
        if (mod_reduce(n, f) != 0) continue;
        small.push_back(f);
        if (f * f != n) large.push_back(n / f);
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

std::vector<Form> reduced_forms(const Int& D) {
    Int sqrtD;
    mpz_sqrt(sqrtD.get_mpz_t(), D.get_mpz_t());
    std::vector<Form> out;
    Int start = mod_reduce(D, 2);
    if (start == 0) start = 2;
    for (Int b = start; b <= sqrtD; b += 2) {
        Int n = (D - b * b) / 4;  // = |a c|
        if (n <= 0) continue;
        for (const Int& e : divisors(n)) {
            // sqrt(D) - b < 2e < sqrt(D) + b
            if (!((2 * e + b) * (2 * e + b) > D)) continue;
            if (!below_sqrt(2 * e - b, D)) continue;
            out.emplace_back(e, b, -(n / e));
            out.emplace_back(-e, b, n / e);
        }
    }
    return out;
}

Form rho(const Form& f, const Int& D, const Int& sqrtD) {
    const auto& [a, b, c] = f;
    Int ac = abs(c);
    Int two_c = 2 * ac;
    // largest b' = -b (mod 2|c|) with b' <= floor(sqrt(D))
    Int base = mod_reduce(-b, two_c);
    Int bp = sqrtD - mod_reduce(sqrtD - base, two_c);
    Int cp = (bp * bp - D) / (4 * c);
    return Form{c, bp, cp};
}

}  // namespace

ClassNumberCertificate class_number(const Int& d) {
    if (d <= 1 || d > 1000000) throw std::invalid_argument("class_number: need 1 < d <= 10^6");
    if (!is_squarefree(d)) throw std::invalid_argument("class_number: d must be squarefree");

    RealQuadraticField K = field_of(d);
    const Int& D = K.discriminant;
    Int sqrtD;
    mpz_sqrt(sqrtD.get_mpz_t(), D.get_mpz_t());

    auto forms = reduced_forms(D);
    std::map<Form, std::size_t> index;
    for (std::size_t i = 0; i < forms.size(); ++i) index[forms[i]] = i;

    std::vector<bool> seen(forms.size(), false);
    Int cycles = 0;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        Form f = forms[i];
        for (;;) {
            auto it = index.find(f);
            if (it == index.end())
                throw internal_inconsistency("class_number: reduction left the reduced set");
            if (seen[it->second]) break;
            seen[it->second] = true;
            f = rho(f, D, sqrtD);
        }
    }

    PellSolution unit = fundamental_unit(d);
    Int h = cycles;
    if (unit.norm == 1) {
        if (mod_reduce(cycles, 2) != 0)
            throw internal_inconsistency("class_number: odd cycle count with norm +1 unit");
        h = cycles / 2;
    }
    return ClassNumberCertificate{d, h, cycles, unit.norm, "forms-enumeration"};
}

ObstructionCertificate class_number_obstruction(const FamilyPair& pair) {
    ClassNumberCertificate two = class_number(2);
    ClassNumberCertificate p = class_number(pair.p);
    if (two.h != 1)
        throw certificate_error("obstruction: h(Q(sqrt 2)) != 1");
    if (mod_reduce(p.h, 2) != 1)
        throw certificate_error("obstruction: h(Q(sqrt p)) is even");
    return ObstructionCertificate{two, p};
}

}  // namespace heron::quadfield
