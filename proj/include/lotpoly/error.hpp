#pragma once

#include <stdexcept>
#include <string>

namespace lotpoly {

// Bad input data: out-of-range values, malformed files, mismatched
// dimensions, invalid geometry. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem and encoding failures. Maps to CLI exit code 1.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A geometry operation (clipping, buffering) could not produce a valid
// result even after snap rounding.
class GeometryError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

}  // namespace lotpoly
