#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

/// Input outside an operation's mathematical domain (poles, invalid parameters,
/// violated preconditions). The CLI maps this to exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical strategy failed to reach its accuracy contract. Carries the
/// best error estimate that was achieved. The CLI maps this to exit code 3.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace fracdiff
