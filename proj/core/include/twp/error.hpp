#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampled function is not negligible on the periodic seam of the box.
class SupportViolation : public Error {
 public:
  using Error::Error;
};

// Doubling the quadrature resolution moved a coefficient by more than the tolerance.
class QuadratureResolutionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t position)
      : ParseError("unknown identifier '" + name + "'", position), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Inputs fall outside the hypotheses an experiment is meant to test.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace twp
