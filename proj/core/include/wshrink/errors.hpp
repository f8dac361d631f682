#pragma once

#include <stdexcept>
#include <string>

namespace wshrink {

// Unsupported wavelet family/order, unknown combo id, bad option value.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed data: wrong length, non-finite sample, inconsistent levels.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A smoothness spec or plan that violates a stated bound.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a mathematical operation.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Quadrature or root finding failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

private:
  double achieved_error_;
};

}  // namespace wshrink
