#pragma once

#include <stdexcept>
#include <string>

namespace ivtm {

/// Element outside the domain of the chosen scheme or alphabet.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Malformed or missing argument (empty tuple, bad parameter).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Integer that does not decode under the requested scheme.
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A size budget (tape length, materialization limit, packing width) was exceeded.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// A caller-supplied function broke its contract (e.g. wrong output length).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// File system failure while writing artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ivtm
