#pragma once

#include <stdexcept>
#include <string>

namespace mot {

// Error hierarchy used across the library. All conditions that a caller can
// trigger with bad data throw one of these; internal invariant violations use
// assert-style checks instead.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// make_measure got a negative weight or otherwise malformed atom list.
struct InvalidMeasure : Error {
    using Error::Error;
};

// Argument outside the documented domain (quantile offset, window bounds, ...).
struct DomainError : Error {
    using Error::Error;
};

// Shadow/embedding requested for a pair not in extended convex order.
struct NotInExtendedOrder : Error {
    using Error::Error;
};

// Martingale construction requested for a pair not in convex order.
struct NotInConvexOrder : Error {
    using Error::Error;
};

// Classical transport between measures of different total mass.
struct MassMismatch : Error {
    using Error::Error;
};

// Cost-spec string could not be parsed; `position` is the offset of the
// first offending character.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Operation not defined for this cost family.
struct UnsupportedCost : Error {
    using Error::Error;
};

// A rival coupling handed to check_convex_minimality violates the coupling
// invariants (marginals, martingale rows, nonnegativity).
struct InvalidRival : Error {
    using Error::Error;
};

// A reproduction experiment could not complete (e.g. root bracketing failed).
struct ExperimentError : Error {
    using Error::Error;
};

}  // namespace mot
