// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "heron/report.hpp"

#include <fstream>
#include <sstream>

namespace heron::report {

namespace {

using homspace::DescentPair;
using homspace::Evidence;
using homspace::ExhaustionEvidence;
using homspace::LocalWitness;
using homspace::PointEvidence;
using homspace::RealSignEvidence;
using homspace::RuleEvidence;
using padic::Place;

std::string int_str(const Int& x) { return x.get_str(); }
Int int_parse(const std::string& s) { return Int(s); }

std::string rat_str(const Rat& x) { return x.get_str(); }
Rat rat_parse(const std::string& s) {
    Rat r(s);
    r.canonicalize();
    return r;
}

std::string place_key(const Place& pl, const family::FamilyPair& fam) {
    if (pl.is_infinite) return "inf";
    if (pl.prime == fam.p) return "p";
    if (pl.prime == fam.q) return "q";
    return pl.prime.get_str();
}

Place place_from_key(const std::string& key, const family::FamilyPair& fam) {
    if (key == "inf") return Place::infinity();
    if (key == "p") return Place::at(fam.p);
    if (key == "q") return Place::at(fam.q);
    return Place::at(Int(key));
}

json cert_to_json(const padic::LiftCertificate& c) {
    json j;
    j["l"] = int_str(c.l);
    j["precision"] = c.precision;
    if (c.jacobian_valuation)
        j["jacobian_valuation"] = *c.jacobian_valuation;
    else
        j["jacobian_valuation"] = nullptr;
    j["liftable"] = c.liftable;
    return j;
}

padic::LiftCertificate cert_from_json(const json& j) {
    padic::LiftCertificate c;
    c.l = int_parse(j.at("l").get<std::string>());
    c.precision = j.at("precision").get<int>();
    if (!j.at("jacobian_valuation").is_null())
        c.jacobian_valuation = j.at("jacobian_valuation").get<long>();
    c.liftable = j.at("liftable").get<bool>();
    return c;
}

json witness_to_json(const LocalWitness& w) {
    json j;
    j["verdict"] = w.solvable ? "solvable" : "unsolvable";
    json ev;
    if (const auto* rs = std::get_if<RealSignEvidence>(&w.evidence)) {
        ev["type"] = "real-sign";
        ev["sign_b1"] = rs->sign_b1;
        ev["sign_b2"] = rs->sign_b2;
    } else if (const auto* pt = std::get_if<PointEvidence>(&w.evidence)) {
        ev["type"] = "point";
        ev["depth"] = pt->depth;
        ev["triple"] = {int_str(pt->triple[0]), int_str(pt->triple[1]), int_str(pt->triple[2])};
        ev["precision"] = pt->precision;
        ev["certificate"] = cert_to_json(pt->certificate);
        ev["eq_a"] = pt->eq_a;
        ev["eq_b"] = pt->eq_b;
    } else if (const auto* ex = std::get_if<ExhaustionEvidence>(&w.evidence)) {
        ev["type"] = "exhaustion";
        ev["precision_cap"] = ex->precision_cap;
        ev["depths"] = ex->depths_tried;
        ev["nodes"] = ex->nodes_examined;
        ev["undecided_at_cap"] = ex->undecided_at_cap;
        ev["infinity_class_checked"] = ex->infinity_class_checked;
    } else if (const auto* ru = std::get_if<RuleEvidence>(&w.evidence)) {
        ev["type"] = "rule";
        ev["rule"] = ru->rule;
    }
    j["evidence"] = ev;
    return j;
}

LocalWitness witness_from_json(const json& j, const Place& pl) {
    LocalWitness w;
    w.place = pl;
    w.solvable = j.at("verdict").get<std::string>() == "solvable";
    const json& ev = j.at("evidence");
    std::string type = ev.at("type").get<std::string>();
    if (type == "real-sign") {
        w.evidence = RealSignEvidence{ev.at("sign_b1").get<int>(), ev.at("sign_b2").get<int>()};
    } else if (type == "point") {
        PointEvidence pt;
        pt.depth = ev.at("depth").get<int>();
        pt.triple = {int_parse(ev.at("triple")[0].get<std::string>()),
                     int_parse(ev.at("triple")[1].get<std::string>()),
                     int_parse(ev.at("triple")[2].get<std::string>())};
        pt.precision = ev.at("precision").get<int>();
        pt.certificate = cert_from_json(ev.at("certificate"));
        pt.eq_a = ev.at("eq_a").get<std::string>();
        pt.eq_b = ev.at("eq_b").get<std::string>();
        w.evidence = std::move(pt);
    } else if (type == "exhaustion") {
        ExhaustionEvidence ex;
        ex.precision_cap = ev.at("precision_cap").get<int>();
        ex.depths_tried = ev.at("depths").get<std::vector<int>>();
        ex.nodes_examined = ev.at("nodes").get<std::uint64_t>();
        ex.undecided_at_cap = ev.at("undecided_at_cap").get<std::uint64_t>();
        ex.infinity_class_checked = ev.at("infinity_class_checked").get<bool>();
        w.evidence = std::move(ex);
    } else {
        w.evidence = RuleEvidence{ev.at("rule").get<std::string>()};
    }
    return w;
}

json classnum_to_json(const quadfield::ClassNumberCertificate& c) {
    json j;
    j["d"] = int_str(c.d);
    j["h"] = int_str(c.h);
    j["h_narrow"] = int_str(c.h_narrow);
    j["unit_norm"] = c.unit_norm;
    j["method"] = c.method;
    return j;
}

quadfield::ClassNumberCertificate classnum_from_json(const json& j) {
    quadfield::ClassNumberCertificate c;
    c.d = int_parse(j.at("d").get<std::string>());
    c.h = int_parse(j.at("h").get<std::string>());
    c.h_narrow = int_parse(j.at("h_narrow").get<std::string>());
    c.unit_norm = j.at("unit_norm").get<int>();
    c.method = j.at("method").get<std::string>();
    return c;
}

json search_to_json(const homspace::RationalSearchResult& s) {
    json j;
    j["bound"] = s.bound;
    if (s.hit) {
        j["hit"] = {int_str((*s.hit)[0]), int_str((*s.hit)[1]), int_str((*s.hit)[2]),
                    int_str((*s.hit)[3])};
    } else {
        j["hit"] = nullptr;
    }
    return j;
}

homspace::RationalSearchResult search_from_json(const json& j) {
    homspace::RationalSearchResult s;
    s.bound = j.at("bound").get<long>();
    if (!j.at("hit").is_null()) {
        const json& h = j.at("hit");
        s.hit = std::array<Int, 4>{int_parse(h[0].get<std::string>()),
                                   int_parse(h[1].get<std::string>()),
                                   int_parse(h[2].get<std::string>()),
                                   int_parse(h[3].get<std::string>())};
    }
    return s;
}

}  // namespace

json to_json(const selmer::DescentReport& r) {
    json j;
    j["p"] = int_str(r.pair.p);
    j["q"] = int_str(r.pair.q);
    j["status"] = r.status == selmer::Status::confirmed ? "theorem-confirmed" : "theorem-violation";
    j["selmer_rank"] = r.selmer.group.rank;
    if (r.rank)
        j["rank"] = *r.rank;
    else
        j["rank"] = nullptr;
    if (r.sha2_dimension)
        j["sha2_dim"] = *r.sha2_dimension;
    else
        j["sha2_dim"] = nullptr;
    j["sha2_structure"] = (r.sha2_dimension && *r.sha2_dimension == 2) ? "(Z/2Z)^2" : "";

    json members = json::array();
    for (const auto& m : r.selmer.group.members)
        members.push_back({m.b1.render(), m.b2.render()});
    j["selmer_members"] = members;

    json witnesses;
    for (const auto& [dp, ws] : r.selmer.witnesses) {
        json per_place;
        for (const auto& w : ws) per_place[place_key(w.place, r.pair)] = witness_to_json(w);
        witnesses[dp.render()] = per_place;
    }
    j["witnesses"] = witnesses;

    json certs;
    if (r.obstruction) {
        certs["class_number_sqrt2"] = classnum_to_json(r.obstruction->h_sqrt2);
        certs["class_number_sqrtp"] = classnum_to_json(r.obstruction->h_sqrtp);
    } else {
        certs["class_number_sqrt2"] = nullptr;
        certs["class_number_sqrtp"] = nullptr;
    }
    json torsion;
    json pts = json::array();
    for (const auto& t : r.torsion.points) {
        if (t.at_infinity)
            pts.push_back(nullptr);
        else
            pts.push_back({int_str(t.x), int_str(t.y)});
    }
    torsion["points"] = pts;
    json counts = json::array();
    for (const auto& [l, n] : r.torsion.curve_counts) counts.push_back({int_str(l), n});
    torsion["curve_counts"] = counts;
    torsion["gcd"] = int_str(r.torsion.counts_gcd);
    torsion["order"] = r.torsion_order;
    certs["torsion"] = torsion;
    certs["space_search_p1"] = search_to_json(r.search_p1);
    certs["space_search_1q"] = search_to_json(r.search_1q);
    json curve_pts = json::array();
    for (const auto& cp : r.mw_points_found) curve_pts.push_back({rat_str(cp.x), rat_str(cp.y)});
    certs["curve_search"] = {{"bound", r.bounds.curve_bound}, {"points", curve_pts}};
    j["certificates"] = certs;

    j["violations"] = r.violations;
    j["bounds"] = {{"curve", r.bounds.curve_bound},
                   {"space", r.bounds.space_bound},
                   {"sanity", r.bounds.sanity_bound}};
    j["versions"] = {{"tool", kToolVersion}, {"schema", kSchemaVersion}};
    return j;
}

selmer::DescentReport report_from_json(const json& j) {
    selmer::DescentReport r;
    r.pair.p = int_parse(j.at("p").get<std::string>());
    r.pair.q = int_parse(j.at("q").get<std::string>());
    r.status = j.at("status").get<std::string>() == "theorem-confirmed"
                   ? selmer::Status::confirmed
                   : selmer::Status::violation;
    r.selmer.group.rank = j.at("selmer_rank").get<int>();
    if (!j.at("rank").is_null()) r.rank = j.at("rank").get<int>();
    if (!j.at("sha2_dim").is_null()) r.sha2_dimension = j.at("sha2_dim").get<int>();

    for (const auto& m : j.at("selmer_members")) {
        auto b1 = homspace::SquareClass::parse(m[0].get<std::string>());
        auto b2 = homspace::SquareClass::parse(m[1].get<std::string>());
        if (!b1 || !b2) throw std::invalid_argument("report: bad square class in selmer_members");
        r.selmer.group.members.push_back(DescentPair{*b1, *b2});
    }

    for (const auto& [key, per_place] : j.at("witnesses").items()) {
        // key looks like "(b1,b2)"
        auto comma = key.find(',');
        auto b1 = homspace::SquareClass::parse(key.substr(1, comma - 1));
        auto b2 = homspace::SquareClass::parse(key.substr(comma + 1, key.size() - comma - 2));
        if (!b1 || !b2) throw std::invalid_argument("report: bad witness key");
        DescentPair dp{*b1, *b2};
        std::vector<LocalWitness> ws;
        for (const auto& [pk, wj] : per_place.items())
            ws.push_back(witness_from_json(wj, place_from_key(pk, r.pair)));
        r.selmer.witnesses.emplace(dp, std::move(ws));
    }

    const json& certs = j.at("certificates");
    if (!certs.at("class_number_sqrt2").is_null()) {
        quadfield::ObstructionCertificate oc{classnum_from_json(certs.at("class_number_sqrt2")),
                                             classnum_from_json(certs.at("class_number_sqrtp"))};
        r.obstruction = std::move(oc);
    }
    const json& torsion = certs.at("torsion");
    for (const auto& t : torsion.at("points")) {
        if (t.is_null())
            r.torsion.points.push_back(selmer::TorsionPoint{true, 0, 0});
        else
            r.torsion.points.push_back(selmer::TorsionPoint{
                false, int_parse(t[0].get<std::string>()), int_parse(t[1].get<std::string>())});
    }
    for (const auto& c : torsion.at("curve_counts"))
        r.torsion.curve_counts.emplace_back(int_parse(c[0].get<std::string>()), c[1].get<long>());
    r.torsion.counts_gcd = int_parse(torsion.at("gcd").get<std::string>());
    r.torsion_order = torsion.at("order").get<int>();
    r.search_p1 = search_from_json(certs.at("space_search_p1"));
    r.search_1q = search_from_json(certs.at("space_search_1q"));
    for (const auto& cp : certs.at("curve_search").at("points")) {
        selmer::CurvePoint pt;
        pt.x = rat_parse(cp[0].get<std::string>());
        pt.y = rat_parse(cp[1].get<std::string>());
        pt.torsion = false;
        r.mw_points_found.push_back(std::move(pt));
    }
    r.violations = j.at("violations").get<std::vector<std::string>>();
    r.bounds.curve_bound = j.at("bounds").at("curve").get<long>();
    r.bounds.space_bound = j.at("bounds").at("space").get<long>();
    r.bounds.sanity_bound = j.at("bounds").at("sanity").get<long>();
    return r;
}

std::string render_markdown(const selmer::DescentReport& r) {
    std::ostringstream os;
    os << "## E_p: y^2 = x(x-1)(x+p^2),  p = " << r.pair.p.get_str() << ", q = "
       << r.pair.q.get_str() << "\n\n";
    os << "- status: "
       << (r.status == selmer::Status::confirmed ? "theorem-confirmed" : "theorem-violation")
       << "\n";
    os << "- 2-Selmer rank: " << r.selmer.group.rank << "\n";
    os << "- rank: " << (r.rank ? std::to_string(*r.rank) : std::string("-")) << "\n";
    os << "- sha[2]: "
       << (r.sha2_dimension && *r.sha2_dimension == 2 ? "(Z/2Z)^2"
                                                      : (r.sha2_dimension ? "dim " + std::to_string(*r.sha2_dimension)
                                                                          : std::string("-")))
       << "\n";
    os << "- Selmer members:";
    for (const auto& m : r.selmer.group.members) os << " " << m.render();
    os << "\n";
    if (r.obstruction) {
        os << "- h(Q(sqrt 2)) = " << r.obstruction->h_sqrt2.h.get_str()
           << ", h(Q(sqrt p)) = " << r.obstruction->h_sqrtp.h.get_str() << " (odd)\n";
    }
    os << "- torsion: order " << r.torsion_order << ", curve-order gcd "
       << r.torsion.counts_gcd.get_str() << "\n";
    os << "- space search (p,1): "
       << (r.search_p1.hit ? "HIT" : "no point up to H = " + std::to_string(r.search_p1.bound))
       << "\n";
    os << "- space search (1,q): "
       << (r.search_1q.hit ? "HIT" : "no point up to H = " + std::to_string(r.search_1q.bound))
       << "\n";
    os << "- curve search: " << r.mw_points_found.size() << " non-torsion point(s) up to H = "
       << r.bounds.curve_bound << "\n";
    if (!r.violations.empty()) {
        os << "\n### violations\n";
        for (const auto& v : r.violations) os << "- " << v << "\n";
    }
    return os.str();
}

std::string render_table_markdown(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "| p | Rank | 2-Selmer Rank | Sha[2] |\n";
    os << "|---|------|---------------|--------|\n";
    for (const auto& row : rows)
        os << "| " << row.p.get_str() << " | " << row.rank << " | " << row.selmer_rank << " | "
           << row.sha2 << " |\n";
    return os.str();
}

json render_table_json(const std::vector<TableRow>& rows) {
    json out = json::array();
    for (const auto& row : rows)
        out.push_back({{"p", row.p.get_str()},
                       {"rank", row.rank},
                       {"selmer_rank", row.selmer_rank},
                       {"sha2", row.sha2},
                       {"confirmed", row.confirmed}});
    return out;
}

std::optional<json> ReportCache::lookup(const Int& p) const {
    std::ifstream in(path_);
    if (!in) return std::nullopt;
    std::string line;
    std::optional<json> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        if (j.value("p", "") == p.get_str() && j.value("version", "") == kToolVersion)
            out = j.at("report");  // last matching line wins
    }
    return out;
}

void ReportCache::append(const Int& p, const json& report) const {
    std::ofstream out(path_, std::ios::app);
    json line;
    line["p"] = p.get_str();
    line["version"] = kToolVersion;
    line["report"] = report;
    out << line.dump() << "\n";
}

}  // namespace heron::report
