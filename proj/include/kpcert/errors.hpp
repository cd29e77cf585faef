#pragma once

#include <stdexcept>
#include <string>

namespace kpcert {

/// Malformed input: wrong shapes, out-of-range indices, non-finite numbers.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside the range the condition is defined for.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A call made while its precondition does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace kpcert
