#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "acyc/records.hpp"

using namespace acyc;

TEST_CASE("cubic string round trip") {
    for (auto& s : {"x^3-318*x-4067", "x^3-x^2+76*x+84", "x^3+6*x+17", "x^3-x^2-2*x+3", "x^3-2"}) {
        CubicPoly Q = cubic_from_string(s);
        CHECK(Q.str() == s);
    }
    CHECK_THROWS(cubic_from_string("x^2-2"));
    CHECK_THROWS(cubic_from_string("2*x^3-1"));
}

TEST_CASE("fixture ingestion") {
    auto fixtures = ingest_fixtures(std::string(FIXTURE_DIR) + "/appendix.jsonl");
    CHECK(fixtures.size() == 13);
    bool found = false;
    for (auto& F : fixtures) {
        if (F.m != 302) continue;
        found = true;
        CHECK(*F.case_tag() == "non-split");
        CHECK(*F.ramified());
        CHECK(*F.val() == 3);
        CHECK(F.q_acyc()->str() == "x^3-93*x-458");
        CHECK(F.group("H_k")->str() == "[12]");
    }
    CHECK(found);
    // m = 87 carries no usable Val
    for (auto& F : fixtures)
        if (F.m == 87) CHECK(!F.val().has_value());
}

TEST_CASE("record json round trip and fixture comparison") {
    PipelineOptions opt;
    ResultRecord R = run_field(Int(87), opt);
    json j = record_json(R);
    CHECK(j["m"] == 87);
    CHECK(j["case"] == "trivial");
    CHECK(j["k_1^ac"] == "Unramified");
    CHECK(group_from_json(j["H_k"]) == R.H_k);

    auto fixtures = ingest_fixtures(std::string(FIXTURE_DIR) + "/appendix.jsonl");
    for (auto& F : fixtures) {
        if (F.m != 87) continue;
        auto D = compare_record(R, F);
        for (auto& msg : D.mismatches) {
            // H_(k_1^acyc) needs --capitulate; everything else must match
            CHECK(msg == "H_(k_1^acyc): no computed value");
        }
    }
}

TEST_CASE("mutated fixture is flagged") {
    PipelineOptions opt;
    ResultRecord R = run_field(Int(87), opt);
    FixtureRecord F;
    F.m = 87;
    F.raw = json{{"m", 87}, {"case", "trivial"}, {"H_k", json::array({7})}};
    auto D = compare_record(R, F);
    REQUIRE(D.mismatches.size() == 1);
    CHECK(D.mismatches[0] == "H_k");
}

TEST_CASE("bad fixture file reports the line") {
    std::string path = "/tmp/acyc_bad_fixture.jsonl";
    {
        std::ofstream out(path);
        out << "{\"m\": 5}\n";
        out << "this is not json\n";
    }
    try {
        ingest_fixtures(path);
        CHECK(false);
    } catch (arithmetic_error& e) {
        std::string w = e.what();
        CHECK(w.find("line 2") != std::string::npos);
    }
}
