#ifndef THERMOSHIFT_ERRORS_HPP
#define THERMOSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thermoshift {

// Invalid input data or violated preconditions. CLI maps this to exit 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries the offending location in the message.
class ParseError : public ValidationError {
 public:
  explicit ParseError(const std::string& what) : ValidationError(what) {}
};

// An iterative solver failed to reach tolerance. CLI maps this to exit 2.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace thermoshift

#endif
