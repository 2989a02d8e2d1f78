#pragma once

#include <stdexcept>
#include <string>

namespace fmwb {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured search bound was exceeded (CLI exit code 3).
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmwb
