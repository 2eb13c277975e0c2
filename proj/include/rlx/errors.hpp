#pragma once

#include <stdexcept>
#include <string>

namespace rlx {

/// Table shapes that do not agree with (H, S, A).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range indices, non-finite values and invalid parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Probability vectors off the simplex.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed files. The message starts with the offending field path.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown agent or environment names and inconsistent experiment settings.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rlx
