#pragma once

#include <stdexcept>
#include <string>

namespace rsbound {

/// Argument outside the mathematical domain of a function (a <= 0, NaN, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed call or configuration (empty list, unknown key, bad flag value).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem's hypothesis does not hold for the given input.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A moment the bound depends on is infinite.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available for this kind of input (e.g. exact paths on continuous laws).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured memory/work budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsbound
