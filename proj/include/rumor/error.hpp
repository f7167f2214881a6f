#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rumor {

/// Base class of every domain error raised by the library. The CLI maps these
/// to exit status 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  /// Short machine-readable category, e.g. "parse", "budget".
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Exact enumeration would exceed the caller's work budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("budget", "exact enumeration needs " + std::to_string(required) +
                            " subsets, budget is " + std::to_string(budget) +
                            "; use sampling instead"),
        required_(required),
        budget_(budget) {}

  /// Saturates at UINT64_MAX.
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

class PreconditionViolation : public Error {
 public:
  explicit PreconditionViolation(const std::string& what,
                                 std::vector<std::uint32_t> offending = {})
      : Error("precondition", what), offending_(std::move(offending)) {}

  /// Nodes that violate the precondition, when the check is per node.
  const std::vector<std::uint32_t>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::uint32_t> offending_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace rumor
