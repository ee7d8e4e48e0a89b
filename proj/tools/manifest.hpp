#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace parkcast::cli {

/// Reproducibility record written next to every command's outputs.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> config;        // resolved settings snapshot
  std::map<std::string, std::string> input_digests; // path -> fnv1a-64 hex
  std::uint64_t seed{0};
  std::string tool_version;
  std::vector<std::string> outputs;
};

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest_hex(const std::filesystem::path& path);

/// Writes `manifest.json`; `created_at` is the only field that varies
/// between byte-identical runs.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir);

}  // namespace parkcast::cli
