#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dime {

// Input failed schema or invariant validation; carries the offending field path.
class validation_error : public std::runtime_error {
public:
  validation_error(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

// An iterative solver stopped before reaching the requested tolerance.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

private:
  double best_residual_;
};

// A model assumption does not hold for the given inputs (e.g. demand slope not negative).
class structural_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation violates an economic policy rule (allocation bounds, paused pool, ...).
class policy_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation applied in the wrong lifecycle state (double bootstrap, day going backwards, ...).
class state_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Swap output would round to zero at micro-unit resolution.
class dust_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dime
