#include "manifest.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "parkcast/core/error.hpp"

namespace parkcast::cli {

std::string file_digest_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw core::Error("cannot open " + path.string() + " for digest");
  }
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir) {
  nlohmann::json j;
  j["subcommand"] = manifest.subcommand;
  j["config"] = manifest.config;
  j["inputs"] = manifest.input_digests;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["outputs"] = manifest.outputs;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["created_at_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();

  const std::filesystem::path path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw core::Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

}  // namespace parkcast::cli
