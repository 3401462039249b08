#pragma once

#include <stdexcept>
#include <string>

namespace holonomy {

// Base class for everything thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid values or violated preconditions: bad norms, dimension mismatches,
// out-of-range indices, non-finite inputs.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: no convergence, cancellation-dominated stencil, ...
class NumericError : public Error {
 public:
  using Error::Error;
};

// Matrix-DSL syntax or semantic error, with 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Spectral gap below tolerance at some path sample.
class DegeneracyError : public NumericError {
 public:
  DegeneracyError(const std::string& message, std::size_t sample_index, double gap)
      : NumericError(message), sample_index_(sample_index), gap_(gap) {}
  std::size_t sample_index() const noexcept { return sample_index_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t sample_index_;
  double gap_;
};

// Path sampling too coarse to follow a band (branch-jump guard tripped).
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Evaluation hit the solenoid axis or another true singularity.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Relative phase requested between (near-)orthogonal states.
class UndefinedPhaseError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace holonomy
