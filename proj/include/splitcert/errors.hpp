#pragma once

#include <stdexcept>
#include <string>

namespace splitcert {

/// Base of every error thrown by the library. The C API maps each subclass
/// onto one `sc_status` code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (dimension mismatch, bad
/// lengths, infeasible box, non-finite coordinates, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A point outside the effective domain of a function (value = +inf) was
/// used where a finite value or a subgradient is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration: unknown problem or algorithm, missing
/// capability, parameter out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed trace, sidecar or config file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace splitcert
