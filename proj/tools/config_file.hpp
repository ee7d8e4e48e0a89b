#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace parkcast::cli {

/// Plain key=value experiment configs: one setting per line, `#` comments
/// and blank lines ignored.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Rejects keys outside `allowed`, so config typos surface immediately.
  void restrict_keys(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

}  // namespace parkcast::cli
