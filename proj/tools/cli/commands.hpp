#pragma once

// Subcommand implementations. Each takes fully parsed options, prints a
// human-readable summary to `out` and, when an output directory is given,
// writes machine-readable files plus manifest.json there.
//
// Options round-trip through JSON so a manifest alone can replay a run.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dfdr/count_table.hpp"
#include "manifest.hpp"

namespace dfdr::cli {

struct AnalyzeOptions {
  std::filesystem::path counts;
  CountSchema schema;
  double lambda = 0.5;
  double epsilon = 1.0;
  std::vector<double> alphas{0.05};
  std::optional<std::filesystem::path> out;

  nlohmann::json to_json() const;
  static AnalyzeOptions from_json(const nlohmann::json& j);
};

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> alphas;
  std::optional<unsigned> threads;

  nlohmann::json to_json() const;
  static SimulateOptions from_json(const nlohmann::json& j);
};

struct TuneOptions {
  std::filesystem::path counts;
  CountSchema schema;
  std::string lambda_grid = "0.5";
  std::string epsilon_grid = "1";
  std::size_t bootstraps = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<std::filesystem::path> out;

  nlohmann::json to_json() const;
  static TuneOptions from_json(const nlohmann::json& j);
};

// `argv` is recorded verbatim in the manifest.
void cmd_analyze(const AnalyzeOptions& opt, const std::vector<std::string>& argv,
                 std::ostream& out);
void cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& argv,
                  std::ostream& out);
void cmd_tune(const TuneOptions& opt, const std::vector<std::string>& argv,
              std::ostream& out);

// Replays the run recorded in `manifest` into `out_dir` after checking that
// its inputs are unchanged.
void cmd_rerun(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
               std::ostream& out);

}  // namespace dfdr::cli
