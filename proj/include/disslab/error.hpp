#pragma once

#include <stdexcept>
#include <string>

namespace disslab {

// bad input, rejected precondition -> exit code 2
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// overflow, leak monitor, non-convergence -> exit code 3
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace disslab
