#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scatterlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together: group mismatch, dimension mismatch,
/// malformed files.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input rejected by a constructor's validation (e.g. a frequency partition
/// with overlaps).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A theorem's hypothesis does not hold for the supplied instance.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Path-signal evaluations would exceed the configured budget.
class BudgetError : public Error {
 public:
  BudgetError(std::size_t depth, std::size_t required, std::size_t budget)
      : Error("path budget exceeded at depth " + std::to_string(depth) + ": " +
              std::to_string(required) + " path-signal evaluations > budget " +
              std::to_string(budget)),
        depth_(depth),
        required_(required),
        budget_(budget) {}

  std::size_t depth() const { return depth_; }
  std::size_t required() const { return required_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t depth_;
  std::size_t required_;
  std::size_t budget_;
};

}  // namespace scatterlab
