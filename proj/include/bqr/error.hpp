#pragma once

#include <stdexcept>
#include <string>

namespace bqr {

/// Bad user input: malformed files, out-of-range settings, inconsistent dimensions.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown inside a kernel or sampler (non-SPD matrix, degenerate chain).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bqr
