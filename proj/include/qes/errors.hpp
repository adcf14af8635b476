#ifndef QES_ERRORS_HPP
#define QES_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qes {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A coefficient lies outside the domain where the ansatz exists.
class InvalidParameter : public Error
{
  public:
    InvalidParameter(std::string name, double value, std::string reason)
        : Error("invalid parameter " + name + " = " + std::to_string(value) + ": " + reason)
        , name_(std::move(name))
        , value_(value)
        , reason_(std::move(reason))
    {
    }

    const std::string& name() const noexcept { return name_; }
    double value() const noexcept { return value_; }
    const std::string& reason() const noexcept { return reason_; }

  private:
    std::string name_;
    double value_;
    std::string reason_;
};

/// Evaluation point outside (0, inf).
class DomainError : public Error
{
  public:
    using Error::Error;
};

class FamilyMismatch : public Error
{
  public:
    using Error::Error;
};

/// The forward recurrence would divide by C_k = 0.
class SingularRecurrence : public Error
{
  public:
    explicit SingularRecurrence(int k)
        : Error("recurrence is singular: C_" + std::to_string(k) + " = 0")
        , index_(k)
    {
    }
    int index() const noexcept { return index_; }

  private:
    int index_;
};

/// The spec does not satisfy the truncation or determinant condition.
/// Carries the offending residual and the admissible values of the
/// constrained coefficient closest to the requested one.
class ConstraintViolated : public Error
{
  public:
    ConstraintViolated(std::string what, std::string parameter, double residual,
                       std::vector<double> admissible)
        : Error(std::move(what))
        , parameter_(std::move(parameter))
        , residual_(residual)
        , admissible_(std::move(admissible))
    {
    }

    const std::string& parameter() const noexcept { return parameter_; }
    double residual() const noexcept { return residual_; }
    const std::vector<double>& admissible() const noexcept { return admissible_; }

  private:
    std::string parameter_;
    double residual_;
    std::vector<double> admissible_;
};

class NoRealRoots : public Error
{
  public:
    using Error::Error;
};

class NoSolution : public Error
{
  public:
    using Error::Error;
};

class QuadratureFailure : public Error
{
  public:
    using Error::Error;
};

class GridError : public Error
{
  public:
    using Error::Error;
};

} // namespace qes

#endif
