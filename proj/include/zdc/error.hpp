#pragma once

#include <stdexcept>
#include <string>

namespace zdc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its domain (log of a non-positive
/// interval, division by an interval containing zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller passed an argument outside the documented range.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Input parsed but violates a data invariant (ordering, anchoring, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A claim could not be certified in interval arithmetic.
class CertificationError : public Error {
public:
    using Error::Error;
};

/// The lattice heuristic gave up (zero pivot, degenerate reduction).
class HeuristicFailure : public Error {
public:
    using Error::Error;
};

}  // namespace zdc
