#pragma once

#include <span>
#include <vector>

namespace skdv {

/// Neumaier-compensated sum; the result depends only on the sequence order.
double compensated_sum(std::span<const double> values);

struct Estimate {
    double mean = 0.0;
    double se = 0.0;  ///< standard error of the mean, sd / sqrt(n)
};

/// Sample mean and standard error (n - 1 normalisation; se = 0 for n < 2).
Estimate mean_and_se(std::span<const double> values);

/// Trapezoidal running integral: out[i] = int_{t_0}^{t_i} y dt.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y);

double median(std::vector<double> values);

/// Least-squares slope of y against x through the origin.
double slope_through_origin(std::span<const double> x, std::span<const double> y);

}  // namespace skdv
