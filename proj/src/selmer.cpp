// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/selmer.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

namespace heron::selmer {

using arith::mod_reduce;
using homspace::HomogeneousSpace;

std::array<SquareClass, 16> square_class_group(const FamilyPair&) {
    std::array<SquareClass, 16> out;
    for (std::uint8_t i = 0; i < 16; ++i) out[i] = SquareClass{i};
    return out;
}

TorsionImage torsion_image(const FamilyPair&) { return TorsionImage{homspace::torsion_classes()}; }

DescentPair normalize_pair(const DescentPair& pair, const TorsionImage& image) {
    if (image.classes != homspace::torsion_classes())
        throw std::invalid_argument("normalize_pair: unexpected torsion image");
    return homspace::normalize_coset(pair);
}

SelmerComputation compute_selmer(const FamilyPair& pair, const homspace::SolverOptions& opts) {
    SelmerComputation out;
    for (std::uint8_t i = 0; i < 16; ++i) {
        for (std::uint8_t j = 0; j < 16; ++j) {
            DescentPair dp{SquareClass{i}, SquareClass{j}};
            HomogeneousSpace space{dp, pair};
            auto ev = homspace::everywhere_locally_solvable(space, opts);
            if (ev.all_solvable) out.group.members.push_back(dp);
            out.witnesses.emplace(dp, std::move(ev.witnesses));
        }
    }
    std::sort(out.group.members.begin(), out.group.members.end());

    // subgroup sanity: contains the torsion image and is closed under product
    std::set<DescentPair> members(out.group.members.begin(), out.group.members.end());
    for (const auto& t : homspace::torsion_classes())
        if (!members.count(t))
            throw internal_inconsistency("compute_selmer: torsion class missing from the group");
    for (const auto& a : members)
        for (const auto& b : members)
            if (!members.count(a * b))
                throw internal_inconsistency("compute_selmer: member set not closed under product");

    std::size_t n = out.group.members.size();
    int log2 = 0;
    while ((1u << log2) < n) ++log2;
    if ((1u << log2) != n || log2 < 2)
        throw internal_inconsistency("compute_selmer: group order is not 2^(2+s)");
    out.group.rank = log2 - 2;
    return out;
}

std::vector<DescentPair> expected_selmer_members(const FamilyPair&) {
    std::vector<DescentPair> gens;
    for (const auto& t : homspace::torsion_classes()) gens.push_back(t);
    gens.push_back(DescentPair{SquareClass::p_class(), SquareClass::one()});
    gens.push_back(DescentPair{SquareClass::one(), SquareClass::q_class()});

    std::set<DescentPair> span{DescentPair{SquareClass::one(), SquareClass::one()}};
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<DescentPair> next = span;
        for (const auto& a : span)
            for (const auto& g : gens)
                if (next.insert(a * g).second) grew = true;
        span = std::move(next);
    }
    return std::vector<DescentPair>(span.begin(), span.end());
}

namespace {

long curve_point_count(const FamilyPair& pair, const Int& l) {
    const std::uint64_t m = l.get_ui();
    const std::uint64_t p2 = mpz_fdiv_ui(Int(pair.p * pair.p).get_mpz_t(), m);
    long count = 1;  // the point at infinity
    for (std::uint64_t x = 0; x < m; ++x) {
        std::uint64_t v = arith::mulmod64(x, (x + m - 1) % m, m);
        v = arith::mulmod64(v, (x + p2) % m, m);
        if (v == 0) {
            ++count;
        } else {
            int chi = arith::jacobi64(v, m);
            count += 1 + chi;
        }
    }
    return count;
}

}  // namespace

TorsionCheck torsion_subgroup(const FamilyPair& pair) {
    TorsionCheck out;
    Int p2 = pair.p * pair.p;
    out.points.push_back(TorsionPoint{true, 0, 0});
    out.points.push_back(TorsionPoint{false, 0, 0});
    out.points.push_back(TorsionPoint{false, 1, 0});
    out.points.push_back(TorsionPoint{false, -p2, 0});

    Int g = 0;
    int good = 0;
    for (Int l = 3; good < 20; ++l) {
        if (!arith::is_prime(l)) continue;
        if (l == pair.p || l == pair.q) continue;
        long n = curve_point_count(pair, l);
        out.curve_counts.emplace_back(l, n);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Int(n).get_mpz_t());
        ++good;
        if (good >= 5 && g == 4) break;  // five good primes normally settle it
    }
    out.counts_gcd = g;
    if (g < 4)
        throw internal_inconsistency("torsion_subgroup: gcd of curve orders below 4 although the "
                                     "full 2-torsion is rational");
    return out;
}

std::vector<CurvePoint> mw_point_search(const FamilyPair& pair, long height_bound) {
    if (height_bound < 1) throw std::invalid_argument("mw_point_search: H must be >= 1");
    std::vector<CurvePoint> out;
    Int p2 = pair.p * pair.p;
    for (long e = 1; e <= height_bound; ++e) {
        Int e2 = Int(e) * e;
        for (long m = -height_bound; m <= height_bound; ++m) {
            if (std::gcd(std::abs(m), e) != 1) continue;
            Int mm(m);
            Int t = mm * (mm - e2) * (mm + p2 * e2);
            if (t < 0) continue;
            if (!mpz_perfect_square_p(t.get_mpz_t())) continue;
            Int y;
            mpz_sqrt(y.get_mpz_t(), t.get_mpz_t());
            CurvePoint pt;
            pt.x = Rat(mm, e2);
            pt.x.canonicalize();
            pt.y = Rat(y, e2 * e);
            pt.y.canonicalize();
            pt.torsion = (t == 0);
            out.push_back(std::move(pt));
        }
    }
    return out;
}

DescentReport conclude(const FamilyPair& pair, const Bounds& bounds) {
    // the class-number certificates cap the family prime at 10^6
    if (pair.p > 1000000)
        throw std::invalid_argument("conclude: p exceeds the supported bound 10^6");
    DescentReport r;
    r.pair = pair;
    r.bounds = bounds;

    homspace::SolverOptions opts{bounds.sanity_bound};
    r.selmer = compute_selmer(pair, opts);
    r.torsion = torsion_subgroup(pair);

    try {
        r.obstruction = quadfield::class_number_obstruction(pair);
    } catch (const certificate_error& e) {
        r.violations.push_back(std::string("class-number certificate failed: ") + e.what());
    }

    HomogeneousSpace sp1{DescentPair{SquareClass::p_class(), SquareClass::one()}, pair};
    HomogeneousSpace s1q{DescentPair{SquareClass::one(), SquareClass::q_class()}, pair};
    r.search_p1 = homspace::rational_point_search(sp1, bounds.space_bound);
    r.search_1q = homspace::rational_point_search(s1q, bounds.space_bound);

    for (auto& pt : mw_point_search(pair, bounds.curve_bound))
        if (!pt.torsion) r.mw_points_found.push_back(pt);

    if (r.selmer.group.rank != 2)
        r.violations.push_back("2-Selmer rank is " + std::to_string(r.selmer.group.rank) +
                               ", expected 2");
    auto expected = expected_selmer_members(pair);
    if (r.selmer.group.members != expected)
        r.violations.push_back("Selmer group differs from the span of the torsion image with "
                               "(p,1) and (1,q)");
    if (r.torsion.counts_gcd != 4)
        r.violations.push_back("gcd of curve orders is " + r.torsion.counts_gcd.get_str() +
                               ", torsion may exceed (Z/2Z)^2");
    if (r.search_p1.hit)
        r.violations.push_back("rational point found on the (p,1) space");
    if (r.search_1q.hit)
        r.violations.push_back("rational point found on the (1,q) space");
    if (!r.mw_points_found.empty())
        r.violations.push_back("non-torsion rational point found on the curve");

    if (r.violations.empty()) {
        r.status = Status::confirmed;
        // s = 2 with both distinguished classes outside the descent image and
        // an even-dimensional sha[2] leaves rank 0, sha[2] = (Z/2Z)^2
        r.sha2_dimension = 2;
        r.rank = 0;
    } else {
        r.status = Status::violation;
    }
    return r;
}

}  // namespace heron::selmer
