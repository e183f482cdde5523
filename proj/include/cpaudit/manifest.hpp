#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cpaudit {

// Reproducibility sidecar written next to every CLI output. The manifest is
// the only artifact that carries a timestamp; primary outputs stay
// byte-stable across runs with the same inputs and seeds.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> input_digests;
  std::string version;
  std::string timestamp;
};

// FNV-1a 64-bit digest of a file's bytes, rendered as 16 lowercase hex chars.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t seed = 0xcbf29ce484222325ull);
std::string fnv1a64_file(const std::filesystem::path& path);

std::string iso8601_utc_now();

nlohmann::json to_json(const RunManifest& manifest);

// Writes `<output>.manifest.json` next to the given primary output path.
void write_manifest(const std::filesystem::path& output_path,
                    const RunManifest& manifest);

}  // namespace cpaudit
