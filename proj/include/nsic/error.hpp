#pragma once

#include <stdexcept>
#include <string>

namespace nsic {

/// Input that violates a documented precondition (gcd, divisibility, range).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that would exceed a configured resource budget.
///
/// This is never a verdict: callers must report it as "infeasible" rather than
/// guessing an answer.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nsic
