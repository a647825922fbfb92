#pragma once

#include <stdexcept>
#include <string>

namespace branched {

/// Input violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two measures that must carry the same total mass do not.
class MassMismatchError : public PreconditionError {
 public:
  MassMismatchError(double lhs, double rhs);
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

/// Parameters fall outside the regime where the closed-form minimizers apply
/// (e.g. T * phi^{-3/2} < 1/4).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two algebraically equal expressions disagree beyond tolerance.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A computer-assisted certificate could not be established.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace branched
