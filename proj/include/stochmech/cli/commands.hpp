#pragma once

#include "stochmech/cli/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace stochmech::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_tolerance = 3 };

/// Outcome of one command. `report` is what lands in report.json.
struct RunResult {
    int exit_code = exit_ok;
    nlohmann::json report;
};

/// Runs the command named in the config, writing config.snapshot, report.json
/// and the data tables into `c.out_dir`. Never throws: failures become exit
/// codes with a diagnostic on `err`.
RunResult run(const ScenarioConfig& c, std::ostream& err);

/// Individual commands; these throw ConfigError, DomainError or NumericalError
/// and return the report body. `pass` in the body decides exit code 3.
nlohmann::json cmd_spectrum(const ScenarioConfig& c);
nlohmann::json cmd_evolve(const ScenarioConfig& c);
nlohmann::json cmd_kernel(const ScenarioConfig& c);
nlohmann::json cmd_control(const ScenarioConfig& c);
nlohmann::json cmd_simulate(const ScenarioConfig& c);
nlohmann::json cmd_compare(const ScenarioConfig& c);

}  // namespace stochmech::cli
