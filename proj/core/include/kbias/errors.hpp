#pragma once

#include <stdexcept>
#include <string>

namespace kbias {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph input (vertex index out of range, bad edge-list text).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A walk kernel was applied to a graph or distribution it is undefined on.
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An experiment precondition on the generated graph failed.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical self-check exceeded its tolerance.
class NumericGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbias
