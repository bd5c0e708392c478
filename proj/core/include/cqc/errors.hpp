#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text; `position` is a byte offset into the input.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg), position(position) {}
    std::size_t position = 0;
};

/// A configured search-space or statevector cap was exceeded.
struct CapExceededError : Error {
    using Error::Error;
};

/// Polynomial of degree > 2 where a QUBO was required.
struct NotQuboError : Error {
    using Error::Error;
};

/// A bit-matrix row does not contain exactly one 1, so it encodes no function.
struct WitnessError : Error {
    using Error::Error;
};

}  // namespace cqc
