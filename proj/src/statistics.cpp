#include "skdv/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skdv {

double compensated_sum(std::span<const double> values)
{
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

Estimate mean_and_se(std::span<const double> values)
{
    Estimate e;
    const std::size_t n = values.size();
    if (n == 0) {
        return e;
    }
    e.mean = compensated_sum(values) / static_cast<double>(n);
    if (n < 2) {
        return e;
    }
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - e.mean;
        sq[i] = d * d;
    }
    const double var = compensated_sum(sq) / static_cast<double>(n - 1);
    e.se = std::sqrt(var / static_cast<double>(n));
    return e;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y)
{
    if (t.size() != y.size()) {
        throw std::invalid_argument("cumulative_trapezoid: size mismatch");
    }
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    }
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("median of an empty set");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
    return 0.5 * (lower + upper);
}

double slope_through_origin(std::span<const double> x, std::span<const double> y)
{
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace skdv
