#pragma once

#include <stdexcept>
#include <string>

namespace padisno {

/// Invalid argument or configuration (dimensions, ranges, flags).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Step size at or above the admissible bound without the unsafe override.
class StepSizeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A prox oracle returned a non-finite or otherwise unusable point.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite gradient or objective value during iteration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents (PGM header, CSV columns, ...).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be analysed (e.g. negative errors in a rate fit).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace padisno
