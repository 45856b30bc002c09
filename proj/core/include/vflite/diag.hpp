#pragma once

#include <stdexcept>
#include <string>

namespace vflite {

/// Raised for malformed input programs. `line` is 1-based; 0 means the
/// location is not attributable to a single line.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string &msg)
      : std::runtime_error(format(line, msg)), line_(line) {}

  int line() const { return line_; }

private:
  static std::string format(int line, const std::string &msg) {
    if (line <= 0)
      return msg;
    return "line " + std::to_string(line) + ": " + msg;
  }
  int line_;
};

/// Raised for internal invariant violations and unusable analysis requests
/// (e.g. assembling a report from runs over different programs).
class AnalysisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vflite
