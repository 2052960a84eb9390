#pragma once

#include <stdexcept>
#include <string>

namespace arithbf {

// Raised when an enumeration would exceed a configured resource budget.
// The CLI maps this to exit code 3; malformed inputs raise
// std::invalid_argument and map to exit code 2.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace arithbf
