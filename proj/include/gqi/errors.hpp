#pragma once

#include <stdexcept>
#include <string>

namespace gqi {

// Non-finite or malformed input.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is finite but lies outside the region where an operation is defined
// (unphysical CM, parameters outside the entropic region, p outside [0,1]).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Closed forms that would divide by zero or take the root of a negative number.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gqi
