#pragma once

#include <stdexcept>
#include <string>

namespace gbeam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// A series or quadrature failed to reach its tolerance.
class ComputationError : public Error
{
  public:
    using Error::Error;
};

/// Operation requested in the wrong outage case (e.g. k outside the main-lobe regime).
class StateError : public Error
{
  public:
    using Error::Error;
};

/// The model's validity conditions do not hold (beam too wide, tangent past pi/2, ...).
class RegimeError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/// A covariance matrix is singular or a correlation coefficient reached +-1.
class DegenerateCovarianceError : public Error
{
  public:
    using Error::Error;
};

class ParseError : public Error
{
  public:
    ParseError(int line, const std::string& message)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line)
    {
    }

    /// 1-based line number, or 0 when the problem is not tied to a line.
    int line() const { return line_; }

  private:
    int line_;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

} // namespace gbeam
