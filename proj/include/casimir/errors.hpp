#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Error taxonomy shared by the library and the CLI. The CLI maps each class
// to a distinct process exit code, so library code must throw the most
// specific class that applies.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files: JSON/CSV syntax, missing fields, wrong column sets.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Inputs that parse but violate a precondition (nonpositive frequency,
// negative oscillator strength, sphere touching the plate, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Operation asked of a model family that does not define it.
class UnsupportedModelError : public DomainError {
 public:
  explicit UnsupportedModelError(const std::string& msg) : DomainError(msg) {}
};

// Geometry that makes the requested evaluation meaningless, e.g. roughness
// peaks that close the gap.
class GeometryError : public DomainError {
 public:
  explicit GeometryError(const std::string& msg) : DomainError(msg) {}
};

// Algorithm failed to reach its accuracy target: quadrature not converging,
// Matsubara tail not decaying, parameter fit diverging.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Requested evaluation point lies outside tabulated or banded coverage.
class CoverageError : public Error {
 public:
  explicit CoverageError(const std::string& msg) : Error(msg) {}
};

}  // namespace casimir
