// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/padic.hpp"

#include <algorithm>
#include <sstream>

namespace heron::padic {

using arith::int_pow;
using arith::mod_reduce;
using arith::valuation_int;

std::string to_string(const Place& pl) {
    if (pl.is_infinite) return "inf";
    return pl.prime.get_str();
}

long valuation(const Int& l, const Rat& x) {
    if (x == 0) throw std::invalid_argument("valuation: x must be nonzero");
    long vn = valuation_int(l, x.get_num());
    long vd = valuation_int(l, x.get_den());
    return vn - vd;
}

namespace {

Int inverse_mod(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw std::invalid_argument("inverse_mod: not invertible");
    return r;
}

// unit part of a nonzero rational x at l, reduced mod m
Int unit_part_mod(const Int& l, const Rat& x, const Int& m) {
    Int num = x.get_num(), den = x.get_den();
    long vn = valuation_int(l, num), vd = valuation_int(l, den);
    Int nu = num / int_pow(l, vn);
    Int du = den / int_pow(l, vd);
    return mod_reduce(nu * inverse_mod(du, m), m);
}

void check_precision(int n) {
    if (n < 1 || n > kMaxPrecision)
        throw std::logic_error("padic: precision request outside [1, 64]");
}

}  // namespace

ValuedRational decompose(const Int& l, const Rat& x, int precision) {
    check_precision(precision);
    long v = valuation(l, x);
    Int m = int_pow(l, precision);
    return ValuedRational{l, v, Residue(unit_part_mod(l, x, m), m)};
}

bool is_square_in_Ql(const Place& pl, const Rat& x) {
    if (x == 0) throw std::invalid_argument("is_square_in_Ql: x must be nonzero");
    if (pl.is_infinite) return x > 0;
    const Int& l = pl.prime;
    long v = valuation(l, x);
    if (v % 2 != 0) return false;
    if (l == 2) {
        Int u = unit_part_mod(l, x, 8);
        return u == 1;
    }
    Int u = unit_part_mod(l, x, l);
    return arith::jacobi(u, l) == 1;
}

Int poly_eval(const Poly& f, const Int& x) {
    Int acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly poly_derivative(const Poly& f) {
    Poly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(Int(static_cast<long>(i)) * f[i]);
    return d;
}

Residue hensel_lift_root(const Poly& f, const Int& l, const Int& x1, int target_precision) {
    check_precision(target_precision);
    if (mod_reduce(poly_eval(f, x1), l) != 0)
        throw precondition_error("hensel_lift_root: f(x1) != 0 (mod l)");
    Poly df = poly_derivative(f);
    if (mod_reduce(poly_eval(df, x1), l) == 0)
        throw precondition_error("hensel_lift_root: f'(x1) = 0 (mod l)");

    Int x = mod_reduce(x1, l);
    int n = 1;
    while (n < target_precision) {
        n = std::min(2 * n, target_precision);
        Int m = int_pow(l, n);
        Int fx = mod_reduce(poly_eval(f, x), m);
        Int dfx = mod_reduce(poly_eval(df, x), m);
        x = mod_reduce(x - fx * inverse_mod(dfx, m), m);
    }
    return Residue(x, int_pow(l, target_precision));
}

Int DiagonalQuadric::residual(const std::array<Int, 3>& z) const {
    return c[0] * z[0] * z[0] + c[1] * z[1] * z[1] + c[2] * z[2] * z[2] - rhs;
}

DiagonalQuadric DiagonalQuadric::primitive_part() const {
    Int g = 0;
    for (const auto& ci : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ci.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), rhs.get_mpz_t());
    if (g <= 1) return *this;
    return DiagonalQuadric{{c[0] / g, c[1] / g, c[2] / g}, rhs / g};
}

std::string DiagonalQuadric::to_string() const {
    std::ostringstream os;
    const char* names[3] = {"z1^2", "z2^2", "z3^2"};
    bool first = true;
    for (int i = 0; i < 3; ++i) {
        if (c[i] == 0) continue;
        if (!first && c[i] > 0) os << " + ";
        if (c[i] < 0) os << (first ? "-" : " - ");
        Int a = abs(c[i]);
        if (a != 1) os << a.get_str() << "*";
        os << names[i];
        first = false;
    }
    os << " = " << rhs.get_str();
    return os.str();
}

namespace {

// minors of the 2x3 Jacobian: M_ij = 4 (cA_i cB_j - cA_j cB_i) z_i z_j
Int jacobian_minor(const QuadricSystem& sys, const std::array<Int, 3>& z, int i, int j) {
    return 4 * (sys.a.c[i] * sys.b.c[j] - sys.a.c[j] * sys.b.c[i]) * z[i] * z[j];
}

}  // namespace

LiftCertificate lift_certificate(const QuadricSystem& sys, const Int& l,
                                 const std::array<Int, 3>& approx, int precision) {
    check_precision(precision);
    if (mod_reduce(approx[0], l) == 0 && mod_reduce(approx[1], l) == 0 &&
        mod_reduce(approx[2], l) == 0)
        throw precondition_error("lift_certificate: approximation is (0,0,0) mod l");
    Int m = int_pow(l, precision);
    if (mod_reduce(sys.a.residual(approx), m) != 0)
        throw precondition_error("lift_certificate: first equation fails mod l^" +
                                 std::to_string(precision));
    if (mod_reduce(sys.b.residual(approx), m) != 0)
        throw precondition_error("lift_certificate: second equation fails mod l^" +
                                 std::to_string(precision));

    std::optional<long> k;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        Int mnr = jacobian_minor(sys, approx, i, j);
        if (mnr == 0) continue;
        long v = valuation_int(l, mnr);
        if (v >= precision) continue;  // valuation not determined by the residue
        if (!k || v < *k) k = v;
    }
    LiftCertificate cert{l, precision, k, false};
    cert.liftable = k.has_value() && precision >= 2 * *k + 1;
    return cert;
}

std::array<Int, 3> refine_system_solution(const QuadricSystem& sys, const Int& l,
                                          std::array<Int, 3> approx, int precision,
                                          int target_precision) {
    check_precision(precision);
    check_precision(target_precision);
    auto cert = lift_certificate(sys, l, approx, precision);
    if (!cert.liftable) throw precondition_error("refine_system_solution: not liftable");
    long k = *cert.jacobian_valuation;

    int n = precision;
    while (n < target_precision) {
        // pick the minor of minimal valuation
        int bi = 0, bj = 1;
        std::optional<long> best;
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            Int mnr = jacobian_minor(sys, approx, i, j);
            if (mnr == 0) continue;
            long v = valuation_int(l, mnr);
            if (!best || v < *best) { best = v; bi = i; bj = j; }
        }
        int next = std::min<int>(target_precision, 2 * (n - static_cast<int>(k)));
        if (next <= n) throw internal_inconsistency("refine_system_solution: no progress");
        Int mod_next = int_pow(l, next);

        // Newton step on coordinates (bi, bj)
        Int ra = sys.a.residual(approx), rb = sys.b.residual(approx);
        Int m11 = 2 * sys.a.c[bi] * approx[bi], m12 = 2 * sys.a.c[bj] * approx[bj];
        Int m21 = 2 * sys.b.c[bi] * approx[bi], m22 = 2 * sys.b.c[bj] * approx[bj];
        Int det = m11 * m22 - m12 * m21;
        Int lk = int_pow(l, k);
        Int det_unit = det / lk;
        Int inv_det = inverse_mod(mod_reduce(det_unit, mod_next), mod_next);
        // delta = -adj(M) * r / det
        Int ti = m22 * ra - m12 * rb;
        Int tj = -m21 * ra + m11 * rb;
        if (mod_reduce(ti, lk) != 0 || mod_reduce(tj, lk) != 0)
            throw internal_inconsistency("refine_system_solution: step not divisible");
        approx[bi] = mod_reduce(approx[bi] - (ti / lk) * inv_det, mod_next);
        approx[bj] = mod_reduce(approx[bj] - (tj / lk) * inv_det, mod_next);
        approx[3 - bi - bj] = mod_reduce(approx[3 - bi - bj], mod_next);
        n = next;
    }
    Int m = int_pow(l, target_precision);
    if (mod_reduce(sys.a.residual(approx), m) != 0 || mod_reduce(sys.b.residual(approx), m) != 0)
        throw internal_inconsistency("refine_system_solution: refined point fails congruence");
    return approx;
}

std::optional<Int> sqrt_in_Zl(const Rat& a, const Int& l, int unit_precision) {
    check_precision(unit_precision);
    if (a == 0) return Int(0);
    long v = valuation(l, a);
    if (v < 0 || v % 2 != 0) return std::nullopt;

    int prec = unit_precision;
    Int m = int_pow(l, prec);
    Int u = unit_part_mod(l, a, m);

    Int s;
    if (l == 2) {
        // the unit class must be read mod 8 regardless of the requested precision
        if (unit_part_mod(l, a, 8) != 1) return std::nullopt;
        // bit-by-bit lift, keeping s = 1 (mod 4) for determinism
        s = 1;
        for (int t = 3; t < prec; ++t) {
            Int mt1 = int_pow(l, t + 1);
            if (mod_reduce(s * s - u, mt1) != 0) s += int_pow(l, t - 1);
        }
        if (mod_reduce(s * s - u, m) != 0 && prec >= 3)
            throw internal_inconsistency("sqrt_in_Zl: 2-adic lift failed");
    } else {
        auto r0 = arith::sqrt_mod_prime(mod_reduce(u, l), l);
        if (!r0 || r0->value == 0) return std::nullopt;
        s = r0->value;
        int n = 1;
        while (n < prec) {
            n = std::min(2 * n, prec);
            Int mn = int_pow(l, n);
            s = mod_reduce(s - (s * s - u) * inverse_mod(mod_reduce(2 * s, mn), mn), mn);
        }
    }
    return int_pow(l, v / 2) * s;
}

}  // namespace heron::padic
