#pragma once

#include <stdexcept>
#include <string>

namespace d2lab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual const char* kind() const noexcept { return "Error"; }
};

/// Group too large for element enumeration under the configured cap.
class OrderCapExceeded : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "OrderCapExceeded"; }
};

/// A class function with a negative or non-integral multiplicity was passed
/// where a genuine character is required.
class NotACharacter : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "NotACharacter"; }
};

/// Two independent computational routes disagreed; indicates a bug.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "ConsistencyFailure"; }
};

/// normal <=> depth two failed on some subgroup; indicates a bug.
class TheoremViolation : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "TheoremViolation"; }
};

class NotAssociative : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "NotAssociative"; }
};

class BadUnit : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "BadUnit"; }
};

/// Proposed subalgebra is not closed under multiplication.
class NotClosed : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "NotClosed"; }
};

/// Proposed subalgebra does not contain the unit of the algebra.
class UnitMissing : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "UnitMissing"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "ParseError"; }
};

}  // namespace d2lab
