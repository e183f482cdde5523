#include "cpaudit/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "cpaudit/errors.hpp"
#include "cpaudit/serialize.hpp"
#include "cpaudit/version.hpp"

namespace cpaudit {

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = seed;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    hash = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), hash);
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return hex;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

nlohmann::json to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["command"] = manifest.command;
  doc["config"] = manifest.config;
  doc["seeds"] = manifest.seeds;
  doc["input_digests"] = manifest.input_digests;
  doc["version"] = manifest.version.empty() ? kVersion : manifest.version;
  doc["timestamp"] = manifest.timestamp.empty() ? iso8601_utc_now()
                                                : manifest.timestamp;
  return doc;
}

void write_manifest(const std::filesystem::path& output_path,
                    const RunManifest& manifest) {
  std::filesystem::path sidecar = output_path;
  sidecar += ".manifest.json";
  write_json(sidecar, to_json(manifest));
}

}  // namespace cpaudit
