// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/arith.hpp"

#include <array>
#include <cmath>

namespace heron::arith {

Residue::Residue(Int v, Int m) : value(std::move(v)), modulus(std::move(m)) {
    if (modulus < 2) throw std::invalid_argument("Residue: modulus must be >= 2");
    if (value < 0 || value >= modulus) throw std::invalid_argument("Residue: value not reduced");
}

Int mod_reduce(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Residue mod_pow(const Int& base, const Int& exponent, const Int& modulus) {
    if (modulus < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
    if (exponent < 0) throw std::invalid_argument("mod_pow: exponent must be >= 0");
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return Residue(r, modulus);
}

int jacobi(const Int& a, const Int& n) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw std::invalid_argument("jacobi: n must be odd and >= 3");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

std::optional<Residue> sqrt_mod_prime(const Int& a, const Int& l) {
    if (l < 3 || !is_prime(l)) throw std::invalid_argument("sqrt_mod_prime: l must be an odd prime");
    Int ar = mod_reduce(a, l);
    if (ar == 0) return Residue(0, l);
    if (jacobi(ar, l) != 1) return std::nullopt;

    Int root;
    if (mod_reduce(l, 4) == 3) {
        root = mod_pow(ar, (l + 1) / 4, l).value;
    } else {
        // Tonelli-Shanks: write l-1 = 2^s * t with t odd.
        Int t = l - 1;
        unsigned long s = mpz_scan1(t.get_mpz_t(), 0);
        mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), s);

        Int z = 2;
        while (jacobi(z, l) != -1) z += 1;

        Int c = mod_pow(z, t, l).value;
        Int r = mod_pow(ar, (t + 1) / 2, l).value;
        Int u = mod_pow(ar, t, l).value;
        unsigned long m = s;
        while (u != 1) {
            Int u2 = u;
            unsigned long i = 0;
            while (u2 != 1) {
                u2 = mod_reduce(u2 * u2, l);
                ++i;
            }
            Int b = c;
            for (unsigned long j = 0; j + i + 1 < m; ++j) b = mod_reduce(b * b, l);
            r = mod_reduce(r * b, l);
            c = mod_reduce(b * b, l);
            u = mod_reduce(u * c, l);
            m = i;
        }
        root = r;
    }
    if (root > (l - 1) / 2) root = l - root;
    return Residue(root, l);
}

namespace {

// Witnesses proving primality for all n < 3.317e24 (Sorenson-Webster).
constexpr std::array<std::uint64_t, 12> kSmallWitnesses = {2,  3,  5,  7,  11, 13,
                                                           17, 19, 23, 29, 31, 37};

bool miller_rabin_round(const Int& n, const Int& nm1, const Int& d, unsigned long s,
                        const Int& base) {
    Int b = mod_reduce(base, n);
    if (b <= 1 || b == nm1) return true;
    Int x = mod_pow(b, d, n).value;
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = mod_reduce(x * x, n);
        if (x == nm1) return true;
    }
    return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : kSmallWitnesses) {
        std::uint64_t x = powmod64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());

    Int nm1 = n - 1;
    Int d = nm1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    for (std::uint64_t a : kSmallWitnesses)
        if (!miller_rabin_round(n, nm1, d, s, Int(static_cast<unsigned long>(a)))) return false;

    static const Int kDeterministicBound = []() {
        Int b;
        b.set_str("3317044064679887385961981", 10);
        return b;
    }();
    if (n < kDeterministicBound) return true;

    // Fixed extra bases; 64 independent rounds push the error below 2^-128.
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(0x48455230ul);
    for (int i = 0; i < 64; ++i) {
        Int a = 2 + rng.get_z_range(n - 3);
        if (!miller_rabin_round(n, nm1, d, s, a)) return false;
    }
    return true;
}

long valuation_int(const Int& l, const Int& x) {
    if (x == 0) throw std::invalid_argument("valuation_int: x must be nonzero");
    Int r = x;
    long v = 0;
    Int q, rem;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.get_mpz_t(), l.get_mpz_t());
        if (rem != 0) break;
        r = q;
        ++v;
    }
    return v;
}

Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m > 1 ? 1 : 0;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

int jacobi64(std::uint64_t a, std::uint64_t n) {
    // binary algorithm; n odd positive
    a %= n;
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            std::uint64_t r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

std::uint64_t isqrt_u128(unsigned __int128 n) {
    if (n == 0) return 0;
    std::uint64_t x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    // correct the floating-point guess
    while (static_cast<unsigned __int128>(x) * x > n) --x;
    while (static_cast<unsigned __int128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

bool is_square_u128(unsigned __int128 n, std::uint64_t* root) {
    // cheap residue filters before the exact square root
    static const auto mask64 = []() {
        std::array<bool, 64> m{};
        for (int i = 0; i < 64; ++i) m[(i * i) & 63] = true;
        return m;
    }();
    if (!mask64[static_cast<std::uint64_t>(n) & 63]) return false;
    static const auto mask63 = []() {
        std::array<bool, 63> m{};
        for (int i = 0; i < 63; ++i) m[(i * i) % 63] = true;
        return m;
    }();
    if (!mask63[static_cast<std::uint64_t>(n % 63)]) return false;
    static const auto mask65 = []() {
        std::array<bool, 65> m{};
        for (int i = 0; i < 65; ++i) m[(i * i) % 65] = true;
        return m;
    }();
    if (!mask65[static_cast<std::uint64_t>(n % 65)]) return false;
    std::uint64_t r = isqrt_u128(n);
    if (static_cast<unsigned __int128>(r) * r != n) return false;
    if (root) *root = r;
    return true;
}

}  // namespace heron::arith
