#pragma once

#include <stdexcept>
#include <string>

namespace pshlab {

/// Argument outside the domain of a weight or functional (t > 0, s out of range, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Malformed input: duplicate grid nodes, bad weight spec, unsupported derivative order.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// An integrand returned a non-finite sample.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& msg, double t)
      : std::runtime_error(msg + " at t=" + std::to_string(t)), t_(t) {}
  double where() const noexcept { return t_; }

 private:
  double t_;
};

/// A numerical estimate (tail exponent, critical exponent, pole mass) could not be formed.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A functional was called outside its precondition (e.g. zero energy in the MT integral).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::logic_error(msg) {}
};

/// Composition -(-chi)^q hit a point where chi > 0.
class PoleError : public std::domain_error {
 public:
  explicit PoleError(const std::string& msg) : std::domain_error(msg) {}
};

/// Two routes to the same verdict disagree outside the inconclusive band.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace pshlab
