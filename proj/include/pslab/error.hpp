#pragma once

#include <stdexcept>
#include <string>

namespace pslab {

/// Bad input: malformed exponent, out-of-domain argument, violated precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A desk-scale guard was exceeded (sizes beyond what the lab computes exactly).
class GuardError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Two independent evaluation routes disagreed; always an implementation bug.
class RouteDisagreement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pslab
