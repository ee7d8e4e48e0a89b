#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace parkcast::core {

/// Line-oriented CSV reader for the project's interchange files.
/// No quoting: fields may not contain commas or newlines. The header row is
/// validated against the expected column names on open. Blank lines are
/// skipped; a trailing CR (Windows line endings) is tolerated on read.
class CsvReader {
 public:
  CsvReader(std::filesystem::path path, const std::vector<std::string>& expected_header);

  /// Reads the next data row. Returns false at end of file.
  /// Throws ParseError when the field count does not match the header.
  bool next(std::vector<std::string>& fields);

  /// 1-based line number of the row most recently returned by next().
  int line() const { return line_; }

  const std::filesystem::path& path() const { return path_; }

  /// Formats "<file>:<line>: <msg>" and throws ParseError.
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  int line_{0};
  size_t n_columns_{0};
};

/// CSV writer with LF line endings and '.' decimal separator.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  size_t n_columns_{0};
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Strict numeric field parsers; `context` names the file/line for errors.
double parse_double_field(const std::string& text, const std::string& context);
long parse_long_field(const std::string& text, const std::string& context);

}  // namespace parkcast::core
