#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (f <= 0, m_s <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two spectra or tables defined on different frequency grids / band sets.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// Numerical validity failure: singular decomposition, closure, or no usable bins.
class SingularError : public Error {
 public:
  using Error::Error;
};

// File geometry/air header disagrees with the active configuration.
class GeometryMismatchError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stlkit
