#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cpa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// An input the metric is not defined for (zero duration, zero distance...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate_input"; }
};

/// SOFT on an all-zero speed series.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "undefined_metric"; }
};

/// Corridor file, scenario file or CLI configuration problem. `pointer` is the
/// JSON pointer of the offending value when known; `line` its 1-based line.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string pointer = {}, int line = 0)
      : Error(format(what, pointer, line)), detail_(what), pointer_(std::move(pointer)), line_(line) {}
  const char* kind() const noexcept override { return "config"; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& pointer() const noexcept { return pointer_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& pointer, int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!pointer.empty()) out += pointer + ": ";
    return out + what;
  }

  std::string detail_;
  std::string pointer_;
  int line_;
};

/// Unreadable input stream or unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

/// Synthetic scenario whose demand exceeds signal capacity.
class InfeasibleScenarioError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "infeasible_scenario"; }
};

}  // namespace cpa
