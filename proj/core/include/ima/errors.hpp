#pragma once

#include <stdexcept>
#include <string>

namespace ima {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters or inconsistent inputs. CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// A hard resource bound was exceeded (enumeration limits, sampling caps).
// CLI exit code 3.
struct CapacityError : Error {
  using Error::Error;
};

// File system / stream failures. CLI exit code 4.
struct IoError : Error {
  using Error::Error;
};

// Unreadable file contents; carries the offending line number in the message.
struct ParseError : IoError {
  using IoError::IoError;
};

}  // namespace ima
