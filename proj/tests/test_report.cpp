// This file is part of heron-descent.
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "heron/report.hpp"

using namespace heron;
using json = report::json;

namespace {

const family::FamilyPair kPair{409, 83641};

// small bounds keep the unit suite fast; the acceptance suite runs defaults
selmer::DescentReport small_report() {
    static selmer::DescentReport rep = selmer::conclude(kPair, selmer::Bounds{50, 200, 10});
    return rep;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    std::string cmd = std::string(HERON_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    if (output) *output = out;
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("json reports round-trip") {
    auto rep = small_report();
    json j1 = report::to_json(rep);
    auto back = report::report_from_json(j1);
    json j2 = report::to_json(back);
    CHECK(j1 == j2);
    CHECK(j1.dump() == j2.dump());

    CHECK(j1.at("p").get<std::string>() == "409");
    CHECK(j1.at("selmer_rank").get<int>() == 2);
    CHECK(j1.at("rank").get<int>() == 0);
    CHECK(j1.at("sha2_dim").get<int>() == 2);
    CHECK(j1.at("status").get<std::string>() == "theorem-confirmed");
    CHECK(j1.at("selmer_members").size() == 16);
    CHECK(j1.at("witnesses").size() == 256);
    // square classes rendered as monomials, never as raw integers
    CHECK(j1.at("witnesses").contains("(p,1)"));
    CHECK(j1.at("witnesses").contains("(-2pq,-1)"));
}

TEST_CASE("violation reports round-trip with null rank fields") {
    auto rep = selmer::conclude(family::FamilyPair{881, 388081}, selmer::Bounds{5, 700, 10});
    REQUIRE(rep.status == selmer::Status::violation);
    json j1 = report::to_json(rep);
    CHECK(j1.at("rank").is_null());
    CHECK(j1.at("sha2_dim").is_null());
    CHECK_FALSE(j1.at("violations").empty());
    json j2 = report::to_json(report::report_from_json(j1));
    CHECK(j1.dump() == j2.dump());
}

TEST_CASE("markdown rendering mentions the conclusion") {
    auto rep = small_report();
    std::string md = report::render_markdown(rep);
    CHECK(md.find("theorem-confirmed") != std::string::npos);
    CHECK(md.find("(Z/2Z)^2") != std::string::npos);
    CHECK(md.find("409") != std::string::npos);
}

TEST_CASE("cache round trip is byte identical") {
    std::string path = "/tmp/heron_cache_test.jsonl";
    std::remove(path.c_str());
    report::ReportCache cache(path);
    CHECK_FALSE(cache.lookup(409).has_value());

    auto rep = small_report();
    json j = report::to_json(rep);
    cache.append(409, j);
    auto hit = cache.lookup(409);
    REQUIRE(hit.has_value());
    CHECK(hit->dump() == j.dump());
    CHECK_FALSE(cache.lookup(449).has_value());
    std::remove(path.c_str());
}

TEST_CASE("cli exit codes partition the outcomes") {
    std::string out;
    CHECK(run_cli("verify 11", &out) == 2);  // 11 = 3 (mod 8)
    CHECK(out.find("wrong-residue-mod-8") != std::string::npos);

    CHECK(run_cli("verify 17", &out) == 2);  // 145 = 5 * 29
    CHECK(out.find("q-not-prime") != std::string::npos);

    CHECK(run_cli("verify", &out) == 64);
    CHECK(run_cli("bogus", &out) == 64);
    CHECK(run_cli("local 409 xx 1 --place 2", &out) == 64);

    // a confirmed prime exits 0 (reduced bounds keep this quick)
    CHECK(run_cli("--space-bound 300 --curve-bound 20 --sanity-bound 10 verify 409", &out) == 0);
    CHECK(out.find("theorem-confirmed") != std::string::npos);

    // p = 881 carries a rational point on its (p,1) space: exit 3 with the
    // violation spelled out
    CHECK(run_cli("--space-bound 700 --curve-bound 5 --sanity-bound 10 verify 881", &out) == 3);
    CHECK(out.find("theorem-violation") != std::string::npos);
}

TEST_CASE("cli scan and classno") {
    std::string out;
    CHECK(run_cli("scan 400 700", &out) == 0);
    CHECK(out.find("409") != std::string::npos);
    CHECK(out.find("641") != std::string::npos);

    CHECK(run_cli("--format json scan 2 100", &out) == 0);
    CHECK(json::parse(out).empty());

    CHECK(run_cli("classno 2", &out) == 0);
    CHECK(out.find("h = 1") != std::string::npos);

    CHECK(run_cli("--format json classno 409", &out) == 0);
    json j = json::parse(out);
    CHECK(j.at("h").get<std::string>() == "1");
    CHECK(j.at("unit").at("norm").get<int>() == -1);
}

TEST_CASE("cli selmer subcommand") {
    std::string out;
    CHECK(run_cli("--sanity-bound 10 --format json selmer 409", &out) == 0);
    json j = json::parse(out);
    CHECK(j.at("selmer_rank").get<int>() == 2);
    CHECK(j.at("selmer_members").size() == 16);
    CHECK(run_cli("selmer 17", &out) == 2);
}

TEST_CASE("cli local witnesses") {
    std::string out;
    CHECK(run_cli("local 409 2q 1 --place 2", &out) == 0);
    CHECK(out.find("unsolvable") != std::string::npos);

    CHECK(run_cli("local 409 1 -1 --place inf", &out) == 0);
    CHECK(out.find("unsolvable") != std::string::npos);

    CHECK(run_cli("--format json local 409 p 1 --place p", &out) == 0);
    json j = json::parse(out);
    CHECK(j.at("verdict").get<std::string>() == "solvable");
    CHECK(j.at("witness").contains("triple"));

    CHECK(run_cli("local 409 1 1 --place 3", &out) == 0);
    CHECK(out.find("torsion") != std::string::npos);
}

TEST_CASE("table command") {
    std::string out;
    CHECK(run_cli("table 2", &out) == 0);  // empty family: header only
    CHECK(out.find("| p |") != std::string::npos);
}
