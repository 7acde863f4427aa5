#pragma once

#include <stdexcept>
#include <string>

namespace shred {

/// Base class for every failure raised by the toolkit.
class ShredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact-tail allocation leaves negative mass on {-1, 0, 1}.
class InfeasibleLaw : public ShredError {
 public:
  using ShredError::ShredError;
};

class RetryBudgetExceeded : public ShredError {
 public:
  using ShredError::ShredError;
};

class MalformedConfig : public ShredError {
 public:
  using ShredError::ShredError;
};

/// A layer arc of the causal map does not hold exactly one coded time.
class InternalInconsistency : public ShredError {
 public:
  using ShredError::ShredError;
};

class PointBudgetExceeded : public ShredError {
 public:
  using ShredError::ShredError;
};

// The next two signal bugs: the inequalities they guard are exact.
class SandwichViolation : public ShredError {
 public:
  using ShredError::ShredError;
};

class InequalityViolation : public ShredError {
 public:
  using ShredError::ShredError;
};

class AmbiguousSide : public ShredError {
 public:
  using ShredError::ShredError;
};

}  // namespace shred
