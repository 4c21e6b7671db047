#pragma once

#include <stdexcept>
#include <string>

namespace mcim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user input: malformed files, bad parameter values, broken configs.
struct ConfigError : Error {
  using Error::Error;
};

// A computation would exceed a configured guard (enumeration size, sample
// budget, memory cap).
struct ResourceError : Error {
  using Error::Error;
};

}  // namespace mcim
