#pragma once

#include <stdexcept>
#include <string>

namespace tangle {

// Base for all analysis errors so callers can distinguish "the math said no"
// from programming errors.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on an operation's inputs was violated.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values produced by pathological parameters.
class NumericDomainError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// F(.,z) has no sign change at this height; V is the whole circle there.
class NoBoundaryError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// d(theta1)/d(theta) is not single-signed-change on the strip; the forcing
// profile is outside the single-fold regime.
class MultipleRootsError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class DegenerateDomainError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// Every direction is contracted equally; the singular frame is undefined.
class DegenerateConformalError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NotFixedError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class OrbitEscapedError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class AllEscapedError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NoBracketError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class FoldNotFoundError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class HypothesisViolatedError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class NoHomoclinicError : public AnalysisError {
 public:
  explicit NoHomoclinicError(const std::string& msg, double best = 0.0)
      : AnalysisError(msg), best_residual(best) {}
  double best_residual;
};

class DivergentError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class IntegrationFailure : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

}  // namespace tangle
