#pragma once

#include <stdexcept>
#include <string>

namespace fpg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration or collection exceeded a configured resource limit.
struct LimitError : Error {
    using Error::Error;
};

// A presentation produced contradictory deductions (never happens for
// consistent input; kept distinct from LimitError so callers can tell).
struct ContradictionError : Error {
    using Error::Error;
};

// Precondition violation: incomplete table, word outside R, lattice
// containment failure, uncertified morphism, ...
struct DomainError : Error {
    using Error::Error;
};

struct ParseError : Error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

} // namespace fpg
