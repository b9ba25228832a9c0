#pragma once

#include <stdexcept>
#include <string>

namespace qclone {

/// Operands disagree on the number of input bits / qubits.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain an operation is defined on (e.g. n below a
/// family's base level).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Measurement basis is malformed, or the measured state has weight outside
/// the span of the basis.
class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Overlap sign pattern cannot be made nonnegative by +-1 re-phasing.
class GaugeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (trial count, n range, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qclone
