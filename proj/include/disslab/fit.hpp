#pragma once

#include <vector>

namespace disslab {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    double rms = 0; // root mean square residual
    int points = 0;
};

// ordinary least squares y = slope * x + intercept; needs two distinct x
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace disslab
