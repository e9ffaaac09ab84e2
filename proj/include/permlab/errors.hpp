#pragma once

#include <stdexcept>
#include <string>

namespace permlab {

// Malformed textual input (bad matrix/edge-list files). CLI exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation precondition: bad parameters, invalid vertices,
// unbalanced subsets, invalid matchings. CLI exit code 3.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A configured size cap or resource budget was exceeded. CLI exit code 3.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace permlab
