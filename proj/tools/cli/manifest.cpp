#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include "dfdr/error.hpp"

#ifndef DFDR_VERSION
#define DFDR_VERSION "unknown"
#endif

namespace dfdr::cli {

std::string tool_version() { return DFDR_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    const auto got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(got)) != 1) {
      throw IoError("sha256 update failed");
    }
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw IoError("sha256 finalisation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

InputDigest digest_input(const std::filesystem::path& path) {
  return {std::filesystem::absolute(path).lexically_normal().string(), sha256_file(path)};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["argv"] = argv;
  j["params"] = params;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  auto& in = j["inputs"] = nlohmann::json::array();
  for (const auto& d : inputs) in.push_back({{"path", d.path}, {"sha256", d.sha256}});
  j["version"] = version;
  j["timestamp"] = timestamp;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.params = j.value("params", nlohmann::json::object());
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& d : j.value("inputs", nlohmann::json::array())) {
      m.inputs.push_back({d.at("path").get<std::string>(), d.at("sha256").get<std::string>()});
    }
    m.version = j.value("version", "");
    m.timestamp = j.value("timestamp", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return RunManifest::from_json(j);
}

void verify_inputs(const RunManifest& manifest) {
  for (const auto& d : manifest.inputs) {
    if (!std::filesystem::exists(d.path)) throw ConfigError("manifest input missing: " + d.path);
    if (sha256_file(d.path) != d.sha256) {
      throw ConfigError("manifest input changed since the run: " + d.path);
    }
  }
}

}  // namespace dfdr::cli
