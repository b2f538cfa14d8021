#include "paranls/fit.hpp"

#include <cmath>

#include "paranls/errors.hpp"

namespace paranls {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw MeasurementError("fit_line: need at least two points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw MeasurementError("fit_line: degenerate abscissae");
    LinearFit f;
    f.points = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (size_t i = 0; i < n; ++i) {
            double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        double s2 = rss / (n - 2);
        f.slope_se = std::sqrt(s2 / sxx);
        f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return f;
}

}  // namespace paranls
