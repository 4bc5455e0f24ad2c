#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "plap/cli/config.hpp"
#include "plap/cli/report.hpp"

namespace plap::cli {

struct ScenarioResult {
    std::string name;
    bool pass = false;
    // {"kind", "message", ...} when the scenario threw, null otherwise.
    Json error;
    Json results;
    std::vector<Table> tables;
};

struct RunResult {
    std::string subcommand;
    std::vector<ScenarioResult> scenarios;
    bool pass = false;
    // Deterministic: config echo, verdicts and results, no timestamps.
    Json report;
    // Tables of the same name merged across scenarios in index order, with a
    // leading scenario column.
    std::vector<Table> tables;
};

// Runs cfg.subcommand for the base config, or for every [scenario.*]
// section when there are any, on up to `jobs` threads.
RunResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// report.json, metadata.json and tables/<name>.csv under `dir`.
void write_outputs(const RunResult& result, const Json& metadata,
                   const std::filesystem::path& dir);

// Serialized form of a library error.
Json error_json(const std::exception& e);

// Entry point of the `plap` executable. Exit codes: 0 when every verdict
// passes, 1 when a verdict fails or a solver throws, 2 for usage and config
// errors.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plap::cli
