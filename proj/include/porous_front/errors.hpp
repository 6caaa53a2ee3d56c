#pragma once

#include <stdexcept>
#include <string>

namespace pfront {

/// Invalid configuration or violated type invariant. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Violated operation precondition (negative fuel, t <= tau, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical failure at run time (NaN, stability violation, no local solution).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pfront
