#pragma once

#include <stdexcept>
#include <string>

namespace layergreen {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A kernel was asked for its value at the pole (r = 0).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement detected a non-integrable singularity.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A parameter sweep could not produce a usable result.
class SweepError : public Error {
 public:
  using Error::Error;
};

}  // namespace layergreen
