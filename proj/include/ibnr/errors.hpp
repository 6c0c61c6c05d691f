#pragma once

#include <stdexcept>
#include <string>

namespace ibnr {

// Precondition violated by the caller (bad parameter, wrong delay family).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Result not representable in double precision.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// A series, quadrature or recursion failed to reach its tolerance, or
// produced something impossible such as a negative variance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed run configuration (CLI / JSON layer).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ibnr
