#include "config_file.hpp"

#include <fstream>

#include "parkcast/core/csv.hpp"
#include "parkcast/core/error.hpp"

namespace parkcast::cli {

namespace {

std::string trim(const std::string& s) {
  const size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw core::Error("cannot open config " + path.string());
  }
  KeyValueConfig cfg;
  cfg.source_ = path.string();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw core::ParseError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw core::ParseError(path.string() + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw core::ParseError(path.string() + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw core::Error(source_ + ": missing key '" + key + "'");
  }
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return core::parse_double_field(get_string(key), source_ + " key '" + key + "'");
}

long KeyValueConfig::get_long(const std::string& key) const {
  return core::parse_long_field(get_string(key), source_ + " key '" + key + "'");
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const {
  const long v = get_long(key);
  if (v < 0) {
    throw core::Error(source_ + ": key '" + key + "' must be nonnegative");
  }
  return static_cast<std::uint64_t>(v);
}

void KeyValueConfig::restrict_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (allowed.count(key) == 0) {
      throw core::Error(source_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace parkcast::cli
