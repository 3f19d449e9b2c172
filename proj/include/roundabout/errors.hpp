#pragma once

#include <stdexcept>
#include <string>

namespace roundabout {

/// Malformed input file (JSON, CSV).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Speed/steering outside the validity region of the kinematic model.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coincident points where a unit normal is required.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss of definiteness or a singular factorization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roundabout
