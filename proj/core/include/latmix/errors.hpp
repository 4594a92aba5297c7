#pragma once

#include <stdexcept>
#include <string>

namespace latmix {

/// Thrown when an exhaustive operation is asked to run above its size guard
/// (dense 2^n state enumeration, 2^{2^n} subset enumeration, ...).
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when floating-point underflow has destroyed the information an
/// operation needs (e.g. stationary weights flushed to zero at tiny alpha^2).
class NumericalDegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace latmix
