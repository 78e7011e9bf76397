#pragma once

#include <stdexcept>
#include <string>

namespace dkp {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A terminating series hit a vanishing denominator before terminating.
class PoleInDenominator : public Error
{
  public:
    using Error::Error;
};

/// Square roots of the NU constants would be imaginary.
class InvalidConstants : public Error
{
  public:
    using Error::Error;
};

/// No sign change of the quantization residual inside the bracket.
class NoRoot : public Error
{
  public:
    using Error::Error;
};

/// A strict-mode evaluator was asked for a configuration outside the
/// admissible parameter region.
class ConstraintViolation : public Error
{
  public:
    using Error::Error;
};

class NoBoundState : public Error
{
  public:
    enum class Reason
    {
        none,
        /// More than one root passed every acceptance filter.
        ambiguous
    };

    explicit NoBoundState(std::string const& what, Reason reason = Reason::none)
      : Error(what)
      , reason_(reason)
    {
    }

    Reason reason() const
    {
        return reason_;
    }

  private:
    Reason reason_;
};

/// Coupling exceeds J + 1/2, the effective angular index is imaginary.
class SupercriticalCoupling : public Error
{
  public:
    using Error::Error;
};

class DomainError : public Error
{
  public:
    using Error::Error;
};

/// The square integral of a radial function does not converge.
class DivergentNorm : public Error
{
  public:
    using Error::Error;
};

} // namespace dkp
