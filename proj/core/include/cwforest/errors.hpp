#pragma once

#include <stdexcept>

namespace cwforest {

/// Base class for all cwforest errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A value-domain precondition was violated: negative rational, zero
/// denominator, malformed continued fraction, and the like.
struct DomainError : Error {
  using Error::Error;
};

/// Input text that does not parse as a rational, path, or coefficient list.
struct ParseError : Error {
  using Error::Error;
};

/// An exact accumulation grew past the configured denominator digit budget.
struct DigitBudgetError : Error {
  using Error::Error;
};

}  // namespace cwforest
