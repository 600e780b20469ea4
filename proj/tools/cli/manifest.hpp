#pragma once

// Run manifests. Every output directory gets a manifest.json recording the
// command line, the resolved parameters, the seed, a SHA-256 digest of each
// input file and the tool version; `dfdr rerun` replays it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dfdr::cli {

struct InputDigest {
  std::string path;  // absolute
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // arguments after the program name
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<InputDigest> inputs;
  std::string version;
  std::string timestamp;  // UTC, ISO 8601

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string sha256_file(const std::filesystem::path& path);
InputDigest digest_input(const std::filesystem::path& path);

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string tool_version();

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

// Throws ConfigError if an input file is missing or its digest changed.
void verify_inputs(const RunManifest& manifest);

}  // namespace dfdr::cli
