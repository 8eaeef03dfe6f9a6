#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cheb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotHermitian : public Error {
public:
  using Error::Error;
};

/// Raised by the Jacobi sweep when the off-diagonal mass fails to drop below
/// the convergence threshold within the sweep cap.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// A function was evaluated outside its domain (e.g. an eigenvalue escapes).
class DomainError : public Error {
public:
  DomainError(const std::string &what, double value)
      : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

private:
  double value_;
};

/// A theorem hypothesis or operation precondition does not hold.
/// `index` identifies the offending list/grid position when there is one.
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string &what,
                             std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

private:
  std::ptrdiff_t index_;
};

class UnknownName : public Error {
public:
  using Error::Error;
};

} // namespace cheb
