#pragma once

#include <stdexcept>

namespace keysim {

// Invalid arguments or inputs the model cannot handle (unknown key, symbol
// without a binding, degenerate target, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file content: layout, parameter, session-log or observation files.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace keysim
