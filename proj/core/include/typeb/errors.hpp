#pragma once

#include <stdexcept>
#include <string>

namespace typeb {

/// Malformed arguments: wrong dimensions, parameters outside their domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well-formed but exceeds a configured size limit.
/// `limit()` names the binding limit so callers can report it.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::string limit, const std::string& what)
      : std::runtime_error(what), limit_(std::move(limit)) {}

  const std::string& limit() const noexcept { return limit_; }

 private:
  std::string limit_;
};

/// A numerical precondition failed (e.g. a Gram matrix is not invertible).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace typeb
