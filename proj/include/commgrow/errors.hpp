#pragma once

#include <stdexcept>
#include <string>

namespace commgrow {

/// Failure of the model itself: the inputs parse and validate, but the
/// process or equations cannot proceed (saturation, infeasibility,
/// non-convergence). Input/format problems use std::invalid_argument.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No vertex carries positive preference weight, so nothing can attach.
class SaturationError : public ModelError {
 public:
  using ModelError::ModelError;
};

class ConvergenceError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A preference function or stationary table with non-positive entries
/// where the model requires positive ones.
class InfeasibleError : public ModelError {
 public:
  InfeasibleError(const std::string& what, int degree)
      : ModelError(what), degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

}  // namespace commgrow
