#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liesym {

// Base for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Raised when an operation needs a polynomial shape (collect, cubic test) and the
// input is not of that shape.
class NotPolynomialError : public Error {
 public:
  using Error::Error;
};

// The question asked does not apply to the input, e.g. the cubic-in-p test on a
// right-hand side where p sits inside an opaque function.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

class ContextMismatchError : public Error {
 public:
  using Error::Error;
};

class CyclicBindingError : public Error {
 public:
  using Error::Error;
};

}  // namespace liesym
