#pragma once

#include <stdexcept>
#include <string>

namespace canproj {

/// Base class for all workbench errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed user input: bad grammar, unknown variable, wrong field literal.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// Parse failure with a position (byte offset in the source line or file).
class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : InputError(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// A computation hit its configured budget (basis size, degree, pair count).
/// Never a wrong answer: the caller sees this instead of a truncated result.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

/// A structural precondition failed: inhomogeneous entry, twist mismatch,
/// incompatible rings, degenerate construction input.
class StructureError : public Error {
public:
    explicit StructureError(const std::string& msg) : Error(msg) {}
};

/// A verification-style operation could not produce its object
/// (no duality witness, skew outcome, non-principal elimination ideal).
class CheckError : public Error {
public:
    explicit CheckError(const std::string& msg) : Error(msg) {}
};

} // namespace canproj
