#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metcur/currents.hpp"

namespace metcur {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ParamSpec {
    std::string name;
    std::string type;  // number | integer | boolean | number_list | object_list
    Json defaultValue;
    std::string description;
    std::optional<double> exclusiveMinimum;
};

struct SuiteInfo {
    std::string name;
    std::string exercises;
    std::vector<ParamSpec> params;
    std::vector<std::string> columns;
    Grid defaultGrid;
    Json example;  // a complete scenario

    Json schema() const;
};

/// Registered suites in a fixed order.
const std::vector<SuiteInfo>& listSuites();
const SuiteInfo& findSuite(const std::string& name);
Json catalogJson();

struct Scenario {
    std::string suite;
    Json params;  // defaults filled in
    Grid grid;
    std::uint64_t seed = 0;
    std::string output;

    /// Normalized form used for the echo and the config hash.
    Json toJson() const;
};

/// Throws UnknownSuite or SchemaViolation.
Scenario parseScenario(const Json& doc);
Scenario loadScenario(const std::filesystem::path& file);

struct Verdict {
    std::string check;
    std::string invariant;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct Report {
    Json scenario;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<Verdict> verdicts;
    Json notes = Json::object();
    std::string gitHash;
    std::string configHash;

    bool passed() const;
    Json toJson() const;
    std::string toCsv() const;
};

Report runScenario(const Scenario& s);

/// report.json and rows.csv (deterministic) plus run_meta.json with wall-clock data.
void writeReport(const Report& r, const std::filesystem::path& dir, double elapsedSeconds);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1aHex(const std::string& bytes);

}  // namespace metcur
