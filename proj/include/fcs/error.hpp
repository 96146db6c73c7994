#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (bad N, s, alpha, R, M, t, p ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// 4s + alpha == N within tolerance: 2*_{s,alpha} and 2*_s coincide.
class DegenerateExponents : public Error {
public:
  using Error::Error;
};

/// Operation defined only for 4s + alpha > N (or another regime restriction).
class UnsupportedRegime : public Error {
public:
  using Error::Error;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public Error {
public:
  using Error::Error;
};

/// Precondition of an operation on fields violated (off-manifold, no decay ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Solver could not start or produced a degenerate answer.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Malformed or unsupported persisted data.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Configuration rejected during parse/validation. Message is line-anchored.
class ConfigError : public Error {
public:
  ConfigError(const std::string &source, int line, const std::string &what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ConfigError(const std::string &what) : Error(what), line_(0) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace fcs
