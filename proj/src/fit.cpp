#include "defspec/fit.hpp"

#include <cmath>
#include <fmt/format.h>

#include "defspec/error.hpp"

namespace defspec {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError(fmt::format("fit needs matching columns ({} vs {})", x.size(), y.size()));
    }
    const auto count = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (x.size() < 2 || !(sxx > 0.0)) {
        throw NumericalError("degenerate fit: need at least two distinct abscissae");
    }
    return sxy / sxx;
}

double observed_order(double coarse_error, double fine_error, double refinement) {
    return std::log(coarse_error / fine_error) / std::log(refinement);
}

}  // namespace defspec
