#pragma once

#include <stdexcept>
#include <string>

namespace lopt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, violated preconditions, malformed configuration.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// Bracket failures, non-convergence, overflow in a numeric branch.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace lopt
