#pragma once

#include <stdexcept>
#include <string>

namespace ultralocal {

// Bad arguments from the caller (negative epsilon, delta < epsilon, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical invariant that must always hold was found broken.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ultralocal
