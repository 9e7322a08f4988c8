#pragma once

#include <stdexcept>
#include <string>

namespace rmc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter or argument outside its admissible range.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Standard-parameter set incompatible with the scaled system (b != 1).
class ScalingViolationError : public Error {
 public:
  using Error::Error;
};

/// Operation evaluated outside its domain of definition.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflowError : public Error {
 public:
  using Error::Error;
};

/// No directed crossing found before the time horizon.
class NoEventError : public Error {
 public:
  using Error::Error;
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_ = 0;
};

/// Runtime-checked existence assumptions behind the Region-2 drop estimates
/// and the theta-equation solver.
enum class Assumption {
  strip1_root,    // C1 > -(sqrt(x0) - sqrt(H0))^2
  strip2_root,    // C2 > -(sqrt(x1+) - sqrt(H1))^2
  theta_bracket,  // k = H exp(C/H) > 4
  theta_level,    // C > theta(H)
};

inline const char* to_string(Assumption a) noexcept {
  switch (a) {
    case Assumption::strip1_root: return "strip1_root";
    case Assumption::strip2_root: return "strip2_root";
    case Assumption::theta_bracket: return "theta_bracket";
    case Assumption::theta_level: return "theta_level";
  }
  return "unknown";
}

class AssumptionError : public Error {
 public:
  AssumptionError(Assumption which, const std::string& what)
      : Error(what), which_(which) {}
  Assumption which() const noexcept { return which_; }

 private:
  Assumption which_;
};

}  // namespace rmc
