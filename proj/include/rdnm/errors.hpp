#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rdnm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A coefficient or constant term is not strictly positive.
class NotMonotone : public Error {
 public:
  using Error::Error;
};

/// No pivot in some column: the Newton operator is undefined at the point.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Jacobian requested for a system with a monomial of total degree > 2.
class DegreeTooHigh : public Error {
 public:
  using Error::Error;
};

/// A certified lower bound on q* exceeds the certified upper bound on q*_max,
/// so the system has no finite least fixed point below that bound.
class DivergenceCertified : public Error {
 public:
  using Error::Error;
};

/// Certified parameters exceed the configured ceiling.
class ParamsInfeasible : public Error {
 public:
  using Error::Error;
};

/// Least fixed point is not finite (closed-form oracle).
class NoFiniteLfp : public Error {
 public:
  using Error::Error;
};

/// Structural property guaranteed by theory was violated.
class StructureViolation : public Error {
 public:
  using Error::Error;
};

/// Aggregates every violation found while validating a model.
class InvalidModel : public Error {
 public:
  explicit InvalidModel(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace rdnm
