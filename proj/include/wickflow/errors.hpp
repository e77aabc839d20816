#pragma once

#include <stdexcept>
#include <string>

namespace wickflow {

/// Inconsistent sizes, insufficient dealiasing padding, missing tower orders,
/// invalid configuration values.
class ConfigurationError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation
/// (negative time, negative variance, Hermite order out of range, ...).
class DomainError : public std::domain_error
{
 public:
  using std::domain_error::domain_error;
};

}  // namespace wickflow
