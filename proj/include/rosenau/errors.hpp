#pragma once

#include <stdexcept>
#include <string>

namespace rosenau {

/// Bad sizes, counts or parameters supplied by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested a kernel derivative that the family does not provide.
class NotImplemented : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The interpolation matrix is numerically singular at the working precision.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// The fictitious-point block B_f could not be inverted.
class BoundaryEliminationError : public std::runtime_error {
 public:
  BoundaryEliminationError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Newton failed after the allowed number of step reductions.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double time_reached)
      : std::runtime_error(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// Initial state violates the algebraic rows of a DAE.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace rosenau
