#ifndef INTERMAP_TYPES_HPP
#define INTERMAP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace intermap {

using cplx = std::complex<double>;

/// Raised when an argument lies outside the region where a routine is valid.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative method (Newton, quadrature refinement, ...) fails.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed inputs (configs, documents, parameters).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace intermap

#endif
