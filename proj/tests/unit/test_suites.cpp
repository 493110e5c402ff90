#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "metcur/errors.hpp"
#include "metcur/suites.hpp"

using namespace metcur;

namespace {

ErrorCode parseCode(const Json& doc) {
    try {
        parseScenario(doc);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("scenario was accepted: " << doc.dump());
    return ErrorCode::EmptySample;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Json ftExample() { return findSuite("f-t").example; }

}  // namespace

TEST_CASE("catalog") {
    const auto& suites = listSuites();
    CHECK(suites.size() == 10);
    std::set<std::string> names;
    for (const auto& s : suites) {
        names.insert(s.name);
        CHECK_FALSE(s.exercises.empty());
        CHECK_FALSE(s.columns.empty());
        const Scenario sc = parseScenario(s.example);
        CHECK(sc.suite == s.name);
        CHECK(sc.toJson() == s.example);
        CHECK(s.schema()["properties"].size() == s.params.size());
    }
    CHECK(names.size() == 10);
    const Json cat = catalogJson();
    CHECK(cat["schema_version"] == kSchemaVersion);
    CHECK(cat["suites"].size() == 10);
    CHECK(findSuite("homology").name == suites[8].name);
}

TEST_CASE("scenario parsing") {
    SUBCASE("defaults are filled in") {
        const Scenario s = parseScenario(Json{{"schema_version", 1}, {"suite", "f-t"}});
        CHECK(s.params["intervals"] == 64);
        CHECK(s.grid.n == 64);
        CHECK(s.seed == 0);
    }
    SUBCASE("overrides") {
        Json d = ftExample();
        d["params"]["t"] = {0.5};
        d["grid"] = {{"n", 5}};
        d["seed"] = 9;
        d["output"] = "somewhere";
        const Scenario s = parseScenario(d);
        CHECK(s.params["t"].size() == 1);
        CHECK(s.grid.n == 5);
        CHECK(s.grid.refine == false);
        CHECK(s.seed == 9);
        CHECK(s.output == "somewhere");
    }
    SUBCASE("rejections") {
        Json d = ftExample();
        d["suite"] = "no-such-suite";
        CHECK((parseCode(d) == ErrorCode::UnknownSuite));

        CHECK((parseCode(Json::array()) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["extra"] = 1;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["schema_version"] = 2;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d.erase("schema_version");
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["params"]["bogus"] = 1;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["params"]["intervals"] = "many";
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["params"]["intervals"] = 2.5;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["params"]["intervals"] = 0;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["params"]["t"] = Json::array();
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["grid"] = {{"n", 0}};
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["grid"] = {{"mesh", 3}};
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
        d = ftExample();
        d["seed"] = -1;
        CHECK((parseCode(d) == ErrorCode::SchemaViolation));
    }
    SUBCASE("files") {
        const auto dir = std::filesystem::temp_directory_path() / "metcur_parse_test";
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "bad.json") << "{ not json";
        try {
            loadScenario(dir / "bad.json");
            FAIL("accepted malformed JSON");
        } catch (const Error& e) {
            CHECK((e.code() == ErrorCode::SchemaViolation));
        }
        CHECK_THROWS_AS(loadScenario(dir / "missing.json"), Error);
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("f-t report") {
    const Report r = runScenario(parseScenario(ftExample()));
    CHECK(r.passed());
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        const double t = row[0];
        CHECK(row[1] == doctest::Approx(std::sqrt(t)).epsilon(1e-12));
        CHECK(row[5] == doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-12));
        CHECK(row[3] >= 1.0 / std::sqrt(t));
    }
    CHECK(r.rows[1][0] == 0.25);
    CHECK(r.rows[1][1] == doctest::Approx(0.5));
    CHECK(r.rows[1][5] == doctest::Approx(2.0));
    CHECK(r.configHash == fnv1aHex(r.scenario.dump()));
    CHECK(r.configHash.size() == 16);
    CHECK_FALSE(r.gitHash.empty());
}

TEST_CASE("homology report with a supplied complex") {
    Json d = findSuite("homology").example;
    d["params"]["basis_trials"] = 1;
    d["params"]["complexes"] = Json::parse(R"([
        {"dims": [3, 3], "boundaries": [[[-1, 0, -1], [1, -1, 0], [0, 1, 1]]], "reduced": true,
         "expected_betti": [0, 1]},
        {"dims": [1, 1], "boundaries": [[[0]]], "expected_betti": [1, 1]}
    ])");
    const Report r = runScenario(parseScenario(d));
    CHECK(r.passed());
    std::size_t supplied = 0;
    for (const auto& v : r.verdicts)
        if (v.check.rfind("complex_", 0) == 0) ++supplied;
    CHECK(supplied == 2);

    d["params"]["complexes"][1]["expected_betti"] = Json::parse("[1, 0]");
    CHECK_FALSE(runScenario(parseScenario(d)).passed());
}

TEST_CASE("fnv1a") {
    CHECK(fnv1aHex("") == "cbf29ce484222325");
    CHECK(fnv1aHex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("reports are reproducible") {
    Json d = findSuite("snowflake").example;
    const auto dir = std::filesystem::temp_directory_path() / "metcur_repro_test";
    std::filesystem::remove_all(dir);
    const Report a = runScenario(parseScenario(d));
    writeReport(a, dir / "a", 0.1);
    const Report b = runScenario(parseScenario(d));
    writeReport(b, dir / "b", 0.2);
    CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
    CHECK(slurp(dir / "a" / "rows.csv") == slurp(dir / "b" / "rows.csv"));
    CHECK(std::filesystem::exists(dir / "a" / "run_meta.json"));

    const Json rep = Json::parse(slurp(dir / "a" / "report.json"));
    CHECK(rep["schema_version"] == 1);
    CHECK(rep["scenario"]["suite"] == "snowflake");
    CHECK(rep["provenance"]["config_hash"] == a.configHash);
    CHECK(rep["passed"] == true);
    const std::string csv = slurp(dir / "a" / "rows.csv");
    CHECK(csv.rfind("mesh,estimate,predicted,ratio\n", 0) == 0);

    // a different seed changes the config hash
    d["seed"] = 2;
    CHECK(runScenario(parseScenario(d)).configHash != a.configHash);
    std::filesystem::remove_all(dir);
}
