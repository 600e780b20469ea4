#pragma once

// Key = value scenario files and small value parsers shared by the
// subcommands.
//
//   # Simulation I at pi0 = 0.8
//   kind = poisson_bin
//   m = 1000
//   pi0 = 0.8
//   alpha = 0.025, 0.05, 0.075, 0.1
//
// Blank lines and text after '#' are ignored. Unknown or repeated keys are
// rejected by name. `kind` selects the scenario defaults; every other key
// overrides one field. Relative `theta1_file` paths resolve against the
// config file's directory.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dfdr/sim.hpp"

namespace dfdr::cli {

ScenarioSpec parse_scenario(std::istream& in,
                            const std::filesystem::path& base_dir = {});
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Keys accepted by parse_scenario, in documentation order.
const std::vector<std::string_view>& scenario_keys();

double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

// Grid axis: "a,b,c" or an inclusive range "start:stop:step".
std::vector<double> parse_grid_axis(std::string_view text, std::string_view what);

// One number per line (blank lines and '#' comments skipped).
std::vector<double> load_values(const std::filesystem::path& path);

}  // namespace dfdr::cli
