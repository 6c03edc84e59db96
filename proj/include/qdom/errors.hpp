#pragma once

#include <stdexcept>
#include <string>

namespace qdom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text; carries a 1-based line number when known.
struct ParseError : Error {
    ParseError(std::string msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_no(line) {}
    std::size_t line_no;
};

// Precondition violations: mismatched carriers, signatures, out-of-domain args.
struct DomainError : Error {
    using Error::Error;
};

// Enumeration would exceed the configured cap.
struct SizeError : Error {
    using Error::Error;
};

// Iteration failed to converge, or a numeric invariant broke down.
struct NumericError : Error {
    using Error::Error;
};

// A sequence handed to a lub routine was not monotone.
struct OrderViolation : Error {
    using Error::Error;
};

}  // namespace qdom
