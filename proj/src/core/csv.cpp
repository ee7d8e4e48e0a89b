#include "parkcast/core/csv.hpp"

#include <charconv>
#include <system_error>

#include "parkcast/core/error.hpp"

namespace parkcast::core {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace

CsvReader::CsvReader(std::filesystem::path path, const std::vector<std::string>& expected_header)
    : path_(std::move(path)), in_(path_) {
  if (!in_) {
    throw Error("cannot open " + path_.string());
  }
  std::string line;
  if (!std::getline(in_, line)) {
    throw ParseError(path_.string() + ":1: empty file, expected header '" + join(expected_header) + "'");
  }
  line_ = 1;
  const auto header = split_line(line);
  if (header != expected_header) {
    throw ParseError(path_.string() + ":1: bad header '" + join(header) + "', expected '" +
                     join(expected_header) + "'");
  }
  n_columns_ = expected_header.size();
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.empty() || line == "\r") continue;
    fields = split_line(line);
    if (fields.size() != n_columns_) {
      fail("expected " + std::to_string(n_columns_) + " fields, got " + std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

void CsvReader::fail(const std::string& msg) const {
  throw ParseError(path_.string() + ":" + std::to_string(line_) + ": " + msg);
}

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header)
    : path_(std::move(path)), out_(path_, std::ios::binary) {
  if (!out_) {
    throw Error("cannot write " + path_.string());
  }
  n_columns_ = header.size();
  out_ << join(header) << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != n_columns_) {
    throw Error(path_.string() + ": row with " + std::to_string(fields.size()) + " fields, header has " +
                std::to_string(n_columns_));
  }
  out_ << join(fields) << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) {
    throw Error("failed writing " + path_.string());
  }
}

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error("cannot format double");
  }
  return std::string(buf, ptr);
}

double parse_double_field(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* first = text.data();
  auto [ptr, ec] = std::from_chars(first, first + text.size(), value);
  if (ec != std::errc{} || ptr != first + text.size()) {
    throw ParseError(context + ": malformed number '" + text + "'");
  }
  return value;
}

long parse_long_field(const std::string& text, const std::string& context) {
  long value = 0;
  const char* first = text.data();
  auto [ptr, ec] = std::from_chars(first, first + text.size(), value);
  if (ec != std::errc{} || ptr != first + text.size()) {
    throw ParseError(context + ": malformed integer '" + text + "'");
  }
  return value;
}

}  // namespace parkcast::core
