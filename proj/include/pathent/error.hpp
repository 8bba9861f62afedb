#pragma once

#include <stdexcept>
#include <string>

namespace pathent {

/// Root of the library's exception hierarchy. `kind()` is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

/// Inputs outside a function's mathematical domain.
class DomainError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

/// A numerical procedure could not produce a trustworthy value.
class NumericalError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalError"; }
};

#define PATHENT_DEFINE_ERROR(Name, Base)                                   \
  class Name : public Base {                                               \
  public:                                                                  \
    using Base::Base;                                                      \
    const char* kind() const noexcept override { return #Name; }           \
  }

PATHENT_DEFINE_ERROR(InvalidOrder, DomainError);
PATHENT_DEFINE_ERROR(InvalidDistribution, DomainError);
PATHENT_DEFINE_ERROR(UnsupportedFamily, DomainError);
PATHENT_DEFINE_ERROR(UnknownName, DomainError);
PATHENT_DEFINE_ERROR(NotNormalizable, DomainError);
PATHENT_DEFINE_ERROR(Infeasible, DomainError);

PATHENT_DEFINE_ERROR(NonConvergence, NumericalError);
PATHENT_DEFINE_ERROR(NonFinite, NumericalError);
PATHENT_DEFINE_ERROR(NoSignChange, NumericalError);

#undef PATHENT_DEFINE_ERROR

}  // namespace pathent
