#pragma once

#include <stdexcept>
#include <string>

namespace ksl {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (unknown key, invalid value).
class config_error : public error {
public:
    using error::error;
};

// Unusable input data: parse failures, empty files, classes too small to split.
class data_error : public error {
public:
    using error::error;
};

// Arguments outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

// Non-finite values, solver failures, degenerate numerics.
class numeric_error : public error {
public:
    using error::error;
};

// Requests beyond the available rank (zero-eigenvalue projections, M out of range).
class rank_error : public error {
public:
    using error::error;
};

} // namespace ksl
