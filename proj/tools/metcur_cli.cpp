#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "metcur/errors.hpp"
#include "metcur/suites.hpp"

namespace {

constexpr int kExitFailedVerdict = 1;
constexpr int kExitError = 2;

int runCommand(const std::string& scenarioPath, const std::string& outDir) {
    const metcur::Scenario s = metcur::loadScenario(scenarioPath);
    const std::filesystem::path out = !outDir.empty() ? outDir : (!s.output.empty() ? s.output : "out");
    const auto start = std::chrono::steady_clock::now();
    const metcur::Report r = metcur::runScenario(s);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    metcur::writeReport(r, out, elapsed);
    for (const auto& v : r.verdicts)
        std::cout << (v.pass ? "PASS " : "FAIL ") << v.check << "  measured=" << v.measured
                  << " tolerance=" << v.tolerance << '\n';
    std::cout << s.suite << ": " << (r.passed() ? "all verdicts pass" : "some verdicts fail") << " -> "
              << (out / "report.json").string() << '\n';
    return r.passed() ? 0 : kExitFailedVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric currents and Lipschitz topology scenario runner"};
    app.require_subcommand(1);

    std::string scenario, outDir;
    auto* run = app.add_subcommand("run", "run a scenario and write report.json, rows.csv, run_meta.json");
    run->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", outDir, "output directory");

    app.add_subcommand("list", "print the suite catalog as JSON");

    auto* validate = app.add_subcommand("validate", "check a scenario file against its suite schema");
    validate->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) {
            std::cout << metcur::catalogJson().dump(2) << '\n';
            return 0;
        }
        if (app.got_subcommand("validate")) {
            const auto s = metcur::loadScenario(scenario);
            std::cout << "valid " << s.suite << " scenario\n" << s.toJson().dump(2) << '\n';
            return 0;
        }
        return runCommand(scenario, outDir);
    } catch (const metcur::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
