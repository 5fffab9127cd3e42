#pragma once

#include <stdexcept>
#include <string>

namespace bsa {

/// Malformed or out-of-range arguments.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request that would exceed a storage or enumeration cap.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// The quantity is undefined for this input (zero polynomial, constant function, ...).
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Function-spec text that fails to parse; `position` is a 0-based offset into the input.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace bsa
