// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
//
// Command-line front end.  Exit codes: 0 theorem confirmed, 2 hypothesis
// rejected, 3 theorem violation, 64 usage, 70 internal error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heron/report.hpp"

namespace {

using heron::Int;
using heron::family::FamilyPair;
using heron::homspace::DescentPair;
using heron::homspace::HomogeneousSpace;
using heron::homspace::LocalWitness;
using heron::homspace::SquareClass;
using heron::padic::Place;
using json = heron::report::json;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 2;
constexpr int kExitViolation = 3;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct Options {
    std::string format = "md";
    std::string cache_path;
    long curve_bound = 1000;
    long space_bound = 10000;
    long sanity_bound = 100;

    heron::selmer::Bounds bounds() const { return {curve_bound, space_bound, sanity_bound}; }
    std::optional<heron::report::ReportCache> cache() const {
        if (cache_path.empty()) return std::nullopt;
        return heron::report::ReportCache(cache_path);
    }
};

std::optional<FamilyPair> validate_or_report(const Int& p, const Options& opt, int& exit_code) {
    auto v = heron::family::validate(p);
    if (auto* pair = std::get_if<FamilyPair>(&v)) return *pair;
    auto reason = std::get<heron::family::Rejection>(v);
    if (opt.format == "json") {
        json j;
        j["p"] = p.get_str();
        j["rejected"] = heron::family::to_string(reason);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "rejected: p = " << p.get_str() << ": " << heron::family::to_string(reason)
                  << "\n";
    }
    exit_code = kExitRejected;
    return std::nullopt;
}

// compute (or fetch) the descent report for a family prime
json report_for(const FamilyPair& pair, const Options& opt) {
    auto cache = opt.cache();
    if (cache) {
        if (auto hit = cache->lookup(pair.p)) {
            std::cerr << "cache hit for p = " << pair.p.get_str() << "\n";
            return *hit;
        }
    }
    std::cerr << "running descent for p = " << pair.p.get_str() << " ..." << "\n";
    auto rep = heron::selmer::conclude(pair, opt.bounds());
    json j = heron::report::to_json(rep);
    if (cache) cache->append(pair.p, j);
    return j;
}

int cmd_verify(const Int& p, const Options& opt) {
    int code = kExitOk;
    auto pair = validate_or_report(p, opt, code);
    if (!pair) return code;
    json j = report_for(*pair, opt);
    if (opt.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << heron::report::render_markdown(heron::report::report_from_json(j));
    bool ok = j.at("status").get<std::string>() == "theorem-confirmed";
    return ok ? kExitOk : kExitViolation;
}

int cmd_scan(const Int& lo, const Int& hi, const Options& opt) {
    auto pairs = heron::family::scan(lo, hi);
    if (opt.format == "json") {
        json out = json::array();
        for (const auto& fp : pairs)
            out.push_back({{"p", fp.p.get_str()}, {"q", fp.q.get_str()}});
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "| p | q |\n|---|---|\n";
        for (const auto& fp : pairs)
            std::cout << "| " << fp.p.get_str() << " | " << fp.q.get_str() << " |\n";
    }
    return kExitOk;
}

int cmd_selmer(const Int& p, const Options& opt) {
    int code = kExitOk;
    auto pair = validate_or_report(p, opt, code);
    if (!pair) return code;
    std::cerr << "computing 2-Selmer group for p = " << p.get_str() << " ...\n";
    auto sel = heron::selmer::compute_selmer(*pair, {opt.sanity_bound});
    if (opt.format == "json") {
        json j;
        j["p"] = pair->p.get_str();
        j["q"] = pair->q.get_str();
        j["selmer_rank"] = sel.group.rank;
        json members = json::array();
        for (const auto& m : sel.group.members) members.push_back({m.b1.render(), m.b2.render()});
        j["selmer_members"] = members;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "2-Selmer rank: " << sel.group.rank << "\nmembers:";
        for (const auto& m : sel.group.members) std::cout << " " << m.render();
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_local(const Int& p, const std::string& b1s, const std::string& b2s,
              const std::string& place_str, const Options& opt) {
    int code = kExitOk;
    auto pair = validate_or_report(p, opt, code);
    if (!pair) return code;
    auto b1 = SquareClass::parse(b1s);
    auto b2 = SquareClass::parse(b2s);
    if (!b1 || !b2) {
        std::cerr << "unparseable square class (use e.g. 1, -1, 2, p, q, 2pq)\n";
        return kExitUsage;
    }
    Place place = Place::infinity();
    if (place_str != "inf") {
        if (place_str == "p")
            place = Place::at(pair->p);
        else if (place_str == "q")
            place = Place::at(pair->q);
        else {
            try {
                place = Place::at(Int(place_str));
            } catch (const std::invalid_argument&) {
                std::cerr << "unparseable place\n";
                return kExitUsage;
            }
            if (!heron::arith::is_prime(place.prime)) {
                std::cerr << "place must be a prime or inf\n";
                return kExitUsage;
            }
        }
    }

    HomogeneousSpace space{DescentPair{*b1, *b2}, *pair};
    LocalWitness w;
    if (space.pair.is_torsion_image()) {
        w = LocalWitness{place, true,
                         heron::homspace::RuleEvidence{
                             "torsion image: solvable at every place by convention"}};
    } else if (place.is_infinite) {
        bool rs = heron::homspace::real_solvable(space);
        w = LocalWitness{place, rs,
                         heron::homspace::RealSignEvidence{b1->negative() ? -1 : 1,
                                                           b2->negative() ? -1 : 1}};
    } else {
        w = heron::homspace::locally_solvable_generic(space, place.prime);
    }

    if (opt.format == "json") {
        json j;
        j["p"] = pair->p.get_str();
        j["pair"] = {b1->render(), b2->render()};
        j["place"] = place.is_infinite
                         ? "inf"
                         : (place.prime == pair->p
                                ? "p"
                                : (place.prime == pair->q ? "q" : place.prime.get_str()));
        j["verdict"] = w.solvable ? "solvable" : "unsolvable";
        j["witness"] = json::object();
        j["witness"]["verdict"] = w.solvable ? "solvable" : "unsolvable";
        if (const auto* pt = std::get_if<heron::homspace::PointEvidence>(&w.evidence)) {
            j["witness"]["depth"] = pt->depth;
            j["witness"]["triple"] = {pt->triple[0].get_str(), pt->triple[1].get_str(),
                                      pt->triple[2].get_str()};
            j["witness"]["precision"] = pt->precision;
            j["witness"]["eq_a"] = pt->eq_a;
            j["witness"]["eq_b"] = pt->eq_b;
        } else if (const auto* ru = std::get_if<heron::homspace::RuleEvidence>(&w.evidence)) {
            j["witness"]["rule"] = ru->rule;
        } else if (const auto* ex =
                       std::get_if<heron::homspace::ExhaustionEvidence>(&w.evidence)) {
            j["witness"]["precision_cap"] = ex->precision_cap;
            j["witness"]["nodes"] = ex->nodes_examined;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << space.pair.render() << " at "
                  << (place.is_infinite ? std::string("inf") : place.prime.get_str()) << ": "
                  << (w.solvable ? "solvable" : "unsolvable") << "\n";
        if (const auto* pt = std::get_if<heron::homspace::PointEvidence>(&w.evidence)) {
            std::cout << "  depth " << pt->depth << ", triple (" << pt->triple[0].get_str() << ", "
                      << pt->triple[1].get_str() << ", " << pt->triple[2].get_str() << ") mod l^"
                      << pt->precision << "\n  equations: " << pt->eq_a << " ; " << pt->eq_b
                      << "\n";
        } else if (const auto* ru = std::get_if<heron::homspace::RuleEvidence>(&w.evidence)) {
            std::cout << "  rule: " << ru->rule << "\n";
        } else if (const auto* ex =
                       std::get_if<heron::homspace::ExhaustionEvidence>(&w.evidence)) {
            std::cout << "  exhausted: depths 0..2, residue tree capped at l^"
                      << ex->precision_cap << ", " << ex->nodes_examined << " nodes\n";
        } else if (const auto* rs = std::get_if<heron::homspace::RealSignEvidence>(&w.evidence)) {
            std::cout << "  signs: b1 " << (rs->sign_b1 > 0 ? "+" : "-") << ", b2 "
                      << (rs->sign_b2 > 0 ? "+" : "-") << "\n";
        }
    }
    return kExitOk;
}

int cmd_classno(const Int& d, const Options& opt) {
    auto cert = heron::quadfield::class_number(d);
    auto unit = heron::quadfield::fundamental_unit(d);
    if (opt.format == "json") {
        json j;
        j["d"] = cert.d.get_str();
        j["h"] = cert.h.get_str();
        j["h_narrow"] = cert.h_narrow.get_str();
        j["unit"] = {{"x", unit.x.get_str()}, {"y", unit.y.get_str()}, {"norm", unit.norm}};
        j["method"] = cert.method;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "d = " << cert.d.get_str() << ": h = " << cert.h.get_str()
                  << ", h_narrow = " << cert.h_narrow.get_str() << ", fundamental unit ("
                  << unit.x.get_str() << ", " << unit.y.get_str() << ") of norm " << unit.norm
                  << "\n";
    }
    return kExitOk;
}

int cmd_table(const Int& max_p, const Options& opt) {
    auto pairs = heron::family::scan(2, max_p);
    std::vector<heron::report::TableRow> rows;
    bool all_ok = true;
    for (const auto& fp : pairs) {
        json j = report_for(fp, opt);
        heron::report::TableRow row;
        row.p = fp.p;
        row.selmer_rank = j.at("selmer_rank").get<int>();
        row.confirmed = j.at("status").get<std::string>() == "theorem-confirmed";
        row.rank = j.at("rank").is_null() ? -1 : j.at("rank").get<int>();
        row.sha2 = j.at("sha2_structure").get<std::string>();
        rows.push_back(row);
        all_ok = all_ok && row.confirmed;
    }
    if (opt.format == "json")
        std::cout << heron::report::render_table_json(rows).dump(2) << "\n";
    else
        std::cout << heron::report::render_table_markdown(rows);
    return all_ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit 2-descent on the curves y^2 = x(x-1)(x+p^2)"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "md"}));
    app.add_option("--cache", opt.cache_path, "JSONL report cache path")->envname("HERON_CACHE");
    app.add_option("--curve-bound", opt.curve_bound, "naive height bound for the curve search");
    app.add_option("--space-bound", opt.space_bound, "height bound for the space searches");
    app.add_option("--sanity-bound", opt.sanity_bound, "upper bound for the sanity prime sweep");

    std::string p_str, lo_str, hi_str, b1_str, b2_str, place_str = "inf", d_str, maxp_str;

    auto* verify = app.add_subcommand("verify", "full descent for one prime");
    verify->add_option("p", p_str, "prime to verify")->required();

    auto* scan = app.add_subcommand("scan", "list family primes in a range");
    scan->add_option("lo", lo_str)->required();
    scan->add_option("hi", hi_str)->required();

    auto* selmer = app.add_subcommand("selmer", "2-Selmer group for one prime");
    selmer->add_option("p", p_str)->required();

    auto* local = app.add_subcommand("local", "local solvability of one homogeneous space");
    local->add_option("p", p_str)->required();
    local->add_option("b1", b1_str)->required();
    local->add_option("b2", b2_str)->required();
    local->add_option("--place", place_str, "inf, 2, 3, p, q or a prime");

    auto* classno = app.add_subcommand("classno", "real quadratic class number");
    classno->add_option("d", d_str)->required();

    auto* table = app.add_subcommand("table", "descent table for all family primes <= max_p");
    table->add_option("max_p", maxp_str)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    auto parse_int = [](const std::string& s, Int& out) {
        try {
            out = Int(s);
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    };

    try {
        Int a, b;
        if (verify->parsed()) {
            if (!parse_int(p_str, a)) return kExitUsage;
            return cmd_verify(a, opt);
        }
        if (scan->parsed()) {
            if (!parse_int(lo_str, a) || !parse_int(hi_str, b)) return kExitUsage;
            return cmd_scan(a, b, opt);
        }
        if (selmer->parsed()) {
            if (!parse_int(p_str, a)) return kExitUsage;
            return cmd_selmer(a, opt);
        }
        if (local->parsed()) {
            if (!parse_int(p_str, a)) return kExitUsage;
            return cmd_local(a, b1_str, b2_str, place_str, opt);
        }
        if (classno->parsed()) {
            if (!parse_int(d_str, a)) return kExitUsage;
            return cmd_classno(a, opt);
        }
        if (table->parsed()) {
            if (!parse_int(maxp_str, a)) return kExitUsage;
            return cmd_table(a, opt);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
