#pragma once

#include <stdexcept>
#include <string>

namespace reviewminer {

// Bad input, bad configuration, or a violated precondition. The CLI maps
// these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data that parsed fine but cannot be processed (e.g. every document is empty
// after cleaning). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reviewminer
