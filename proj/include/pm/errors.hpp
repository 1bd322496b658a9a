#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pm {

// Base class for all recoverable computation errors raised by the library.
// The CLI maps these to exit code 1 with a structured error object; genuine
// usage errors (bad flags) are handled separately and exit with code 2.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define PM_DEFINE_ERROR(Name)                                     \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(msg) {}         \
    const char* kind() const noexcept override { return #Name; }  \
  }

PM_DEFINE_ERROR(PoleAtPoint);
PM_DEFINE_ERROR(NoFiniteLimit);
PM_DEFINE_ERROR(UnrepresentableDenominator);
PM_DEFINE_ERROR(ZeroFunction);
PM_DEFINE_ERROR(DecompositionOutOfChart);
PM_DEFINE_ERROR(SingularPrefactor);
PM_DEFINE_ERROR(NotClassPreserving);
PM_DEFINE_ERROR(MethodNotApplicable);
PM_DEFINE_ERROR(OutsideDeformationDomain);
PM_DEFINE_ERROR(DomainPairingViolation);
PM_DEFINE_ERROR(NonPolynomialRestriction);
PM_DEFINE_ERROR(UnknownSuite);

#undef PM_DEFINE_ERROR

// Expression parse failure; carries the byte offset of the offending token.
struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  const char* kind() const noexcept override { return "SyntaxError"; }
};

}  // namespace pm
