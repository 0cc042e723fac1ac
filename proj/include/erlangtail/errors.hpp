#pragma once

#include <stdexcept>
#include <string>

namespace erlangtail {

// Error taxonomy. The CLI maps these onto exit codes:
//   DomainError -> 1, InputError -> 2, NumericError -> 3.

/// Malformed or inconsistent input (shapes, ranges, file syntax).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input is well formed but violates a modelling precondition.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical routine failed to converge or a tolerance could not be met.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace erlangtail
