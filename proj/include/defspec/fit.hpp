#pragma once

#include <span>

namespace defspec {

/// Ordinary least-squares slope of y against x. NumericalError when fewer
/// than two distinct x values are given.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Observed order from errors at spacings h and h / refinement.
double observed_order(double coarse_error, double fine_error, double refinement = 2.0);

}  // namespace defspec
