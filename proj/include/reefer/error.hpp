#pragma once

#include <stdexcept>
#include <string>

namespace reefer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (cycle CSV, schedule CSV, config JSON).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Arguments violating an operation's preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Vehicle speed beyond the engine's reach in every gear.
class OverspeedError : public Error {
public:
    OverspeedError() : Error("overspeed") {}
};

/// Requested wheel force needs more torque than the engine delivers at that speed.
class TorqueLimitError : public Error {
public:
    TorqueLimitError() : Error("engine torque limit exceeded") {}
};

/// Towing requested at a step where it cannot be applied.
class TowingUnavailable : public Error {
public:
    using Error::Error;
};

/// No control strategy keeps the battery above its floor.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

} // namespace reefer
