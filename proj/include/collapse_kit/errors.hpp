#pragma once

#include <stdexcept>
#include <string>

namespace collapse_kit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a model or formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (configuration, table files, slice sequences).
class InputError : public Error {
 public:
  using Error::Error;
};

/// No sign change found while bracketing a root.
class NoRootError : public Error {
 public:
  NoRootError(const std::string& what, double lo, double hi)
      : Error(what + " (scanned [" + std::to_string(lo) + ", " + std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Newton divergence or a degenerate Jacobian: the solution has entered a
/// multivalued (folded) region. `last_good` is the last accepted
/// continuation parameter.
class FoldError : public Error {
 public:
  FoldError(const std::string& what, double last_good)
      : Error(what + " (last good parameter " + std::to_string(last_good) + ")"),
        last_good_(last_good) {}
  double last_good() const { return last_good_; }

 private:
  double last_good_;
};

/// Adaptive quadrature ran out of subdivision depth.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double estimate, double bound)
      : Error(what), estimate_(estimate), bound_(bound) {}
  double estimate() const { return estimate_; }
  double bound() const { return bound_; }

 private:
  double estimate_;
  double bound_;
};

/// phi(I) = 0 where the formula divides by it.
class SingularNonlinearityError : public Error {
 public:
  using Error::Error;
};

/// Initial intensity profile is non-positive or otherwise unusable.
class ProfileError : public Error {
 public:
  using Error::Error;
};

/// Point outside the region reachable by the analytic solution.
class UnreachableError : public Error {
 public:
  using Error::Error;
};

/// Requested propagation distance lies at or beyond the collapse point.
class CollapseReachedError : public Error {
 public:
  using Error::Error;
};

}  // namespace collapse_kit
