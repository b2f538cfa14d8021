#pragma once

#include <vector>

namespace paranls {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    int points = 0;
};

// Ordinary least squares y = intercept + slope x; needs at least two distinct x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace paranls
