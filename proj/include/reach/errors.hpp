#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reach {

/// Malformed arguments: dimension mismatches, out-of-range indices, empty sets.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on a system that does not support it.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A documented precondition of a closed-form formula does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A structural invariant was found broken at runtime.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A lattice set (or the work needed to build one) exceeded the configured cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t step, double projected_cost)
      : std::runtime_error(what), step_(step), projected_cost_(projected_cost) {}

  /// Index k of the reachable set that could not be built.
  std::size_t step() const noexcept { return step_; }
  /// Number of grid points the failing step would have had to compute.
  double projected_cost() const noexcept { return projected_cost_; }

 private:
  std::size_t step_;
  double projected_cost_;
};

}  // namespace reach
