#pragma once

#include <stdexcept>
#include <string>

namespace rydmeas {

// Input outside the domain of an operation (non-positive distance, k = 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unknown key in one of the built-in tables.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Integrator instability, NaN, singular fit, undefined phase.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem size beyond what the dense/sparse state-vector code supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace rydmeas
