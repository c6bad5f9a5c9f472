#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cadyn {

/// Raised when a computation would exceed one of the configured size budgets.
/// The message always names the budget and the size that was requested.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string budget, double requested, double limit)
      : std::runtime_error(budget + " budget exceeded: requested " +
                           format_size(requested) + ", limit " +
                           format_size(limit)),
        budget_(std::move(budget)) {}

  const std::string& budget() const { return budget_; }

 private:
  static std::string format_size(double v);
  std::string budget_;
};

/// Malformed rule or matrix text. `line()` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cadyn
