#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kaczmarz {

// Base for everything the library throws. Numerical failures are split out so
// front ends can map them to a distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroRow : public Error {
 public:
  explicit ZeroRow(std::size_t row)
      : Error("row " + std::to_string(row) + " has zero norm"), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidLambda : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidCycle : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidBudget : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyMatrix : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class Breakdown : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateResiduals : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Inconsistent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kaczmarz
