#pragma once

#include <stdexcept>
#include <string>

namespace qrc {

/// Malformed or inconsistent configuration (unknown class spec, bad flag value).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A precondition or enumeration guard was violated: dimension mismatch,
/// qubit count out of range, sample count above the exact-enumeration limit,
/// candidate-word budget exhausted.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The numerics failed to converge or lost too much accuracy to be trusted.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qrc
