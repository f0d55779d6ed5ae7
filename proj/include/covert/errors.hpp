#pragma once

#include <stdexcept>
#include <string>

namespace covert {

/// Argument outside an operation's domain (negative power, bad ordering, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A bound was evaluated outside the regime in which it is valid.
class RegimeViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Jamming strategy needs at least one friendly node.
class NoJammerError : public std::runtime_error {
public:
    NoJammerError() : std::runtime_error("no jammer available: friendly node set is empty") {}
};

/// Reading or writing a file failed; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace covert
