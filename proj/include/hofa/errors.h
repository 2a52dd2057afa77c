#ifndef HOFA_ERRORS_H_
#define HOFA_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hofa {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, out-of-range parameters, etc.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An exact computation would enumerate more points than the configured budget.
// Callers are expected to switch to a Monte Carlo mode.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(uint64_t required, uint64_t budget)
      : Error("exact enumeration needs " + std::to_string(required) +
              " points, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  uint64_t required() const { return required_; }
  uint64_t budget() const { return budget_; }

 private:
  uint64_t required_;
  uint64_t budget_;
};

// An input does not satisfy the hypothesis of the result being computed
// (e.g. isomorphic systems handed to the interior experiment).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// A combinatorial search would exceed its hard cutoff.
class SearchLimitExceeded : public Error {
 public:
  using Error::Error;
};

// Something that must never happen did (broken RNG, negative Gowers power).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hofa

#endif  // HOFA_ERRORS_H_
