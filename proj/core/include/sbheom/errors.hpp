// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace sbheom {

// Invalid configuration, malformed input file, or violated precondition
// that the caller could have checked. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Propagation produced non-finite values. Carries the time of failure.
// CLI maps this to exit code 3.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// An enumeration or allocation would exceed the configured memory budget.
// CLI maps this to exit code 4.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::uint64_t requested, std::uint64_t budget)
      : std::runtime_error(what), requested_(requested), budget_(budget) {}
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t requested_;
  std::uint64_t budget_;
};

// Quadrature failed to reach the requested tolerance. Carries the achieved
// error estimate so callers can decide whether to proceed anyway.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace sbheom
