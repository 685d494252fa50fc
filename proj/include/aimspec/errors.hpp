#pragma once

#include <stdexcept>
#include <string>

namespace aimspec {

/// Base class for every error raised by the library. The CLI maps
/// ConfigError to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation hit a zero of a denominator (rational function, Gamma).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Coordinate outside the open domain of a component.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Special-function parameters for which the requested value is undefined.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class NoBracketError : public Error {
 public:
  using Error::Error;
};

class MissingBracketError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class DegreeOverflowError : public Error {
 public:
  using Error::Error;
};

class NonFiniteSampleError : public Error {
 public:
  using Error::Error;
};

/// A square-root argument in a closed form went negative.
class NegativeDiscriminantError : public Error {
 public:
  using Error::Error;
};

class NoBoundStateError : public Error {
 public:
  using Error::Error;
};

class UnresolvedStateError : public Error {
 public:
  using Error::Error;
};

/// Invalid user input: coupling constraints, ranges, unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Error annotated with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + " stage: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace aimspec
