#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamvf {

// Exception hierarchy of the core library. The C boundary maps each class to
// a status code (see hamvf.h).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed expression, out-of-range index, foreign token, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ValidationError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A dataset failed one of its consistency checks.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamvf
