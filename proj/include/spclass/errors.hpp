#pragma once

#include <stdexcept>
#include <string>

namespace spclass {

// Bad user input: malformed files, out-of-range parameters, shape mismatches.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during an otherwise valid computation (non-PD factorization,
// degenerate chain, non-convergence). The CLI maps this to exit code 1.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spclass
