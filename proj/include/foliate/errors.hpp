#pragma once

#include <stdexcept>
#include <string>

namespace foliate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field evaluator produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The metric is singular or not positive definite at a point.
class LinearSolveError : public Error {
 public:
  using Error::Error;
};

/// A declared frame fails orthonormality or spanning checks.
class FrameError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the subbundle an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Index (r, j, n) outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A scenario could not be built, or a declared flag did not re-verify.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Requested leaf is not in the scenario's closed-leaf catalog.
class UnsupportedLeafError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or report document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace foliate
