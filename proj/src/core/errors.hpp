#pragma once

#include <stdexcept>
#include <string>

namespace lvbif {

// Rejected input: inadmissible parameters, malformed configuration.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the region where a closed form is defined (e.g. beta <= sigma/gamma).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Iterative method failed. `residual` carries the last residual norm when one exists.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Two independent evaluations of the same quantity disagreed.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace lvbif
