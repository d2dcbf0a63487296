#include "disslab/fit.hpp"

#include <cmath>

#include "disslab/error.hpp"

namespace disslab {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw ValidationError("fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw ValidationError("fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0) throw ValidationError("fit: all x values coincide");
    LinearFit f;
    f.points = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        sse += r * r;
    }
    f.rms = std::sqrt(sse / n);
    f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    return f;
}

} // namespace disslab
