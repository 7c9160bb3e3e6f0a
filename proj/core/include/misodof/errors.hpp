#pragma once

#include <stdexcept>
#include <string>

namespace misodof {

// Pattern text could not be parsed. Row and column are 1-based.
class PatternParseError : public std::runtime_error {
 public:
  PatternParseError(std::string what, int row, int col)
      : std::runtime_error(std::move(what)), row_(row), col_(col) {}
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

// A requested scheme cannot be constructed under the given CSIT budget.
// Carries the inequality that failed, rendered as text.
class InfeasibleSchemeError : public std::runtime_error {
 public:
  InfeasibleSchemeError(std::string what, std::string failed_condition)
      : std::runtime_error(std::move(what)),
        failed_condition_(std::move(failed_condition)) {}
  const std::string& failed_condition() const { return failed_condition_; }

 private:
  std::string failed_condition_;
};

// Exact vertex enumeration (and anything built on it) is limited to K <= 4.
class DimensionGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace misodof
