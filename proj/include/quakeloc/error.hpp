#pragma once

#include <stdexcept>
#include <string>

namespace quakeloc {

// Fatal pipeline error. Stage failures surface as exit status 1 from the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration. The CLI maps this to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quakeloc
