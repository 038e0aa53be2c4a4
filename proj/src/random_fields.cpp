#include "skdv/random_fields.hpp"

#include <cmath>
#include <stdexcept>

#include "skdv/functionals.hpp"

namespace skdv {
namespace {

Field rescale_h1(const Field& u, double h1_norm)
{
    const double n = std::sqrt(h1_norm_sq(u));
    if (n == 0.0) {
        return u;
    }
    return u * (h1_norm / n);
}

double log_uniform(RandomStream& rng, double lo, double hi)
{
    return lo * std::pow(hi / lo, rng.uniform());
}

}  // namespace

Field random_band_limited(const Grid& grid, std::size_t max_mode, double h1_norm, RandomStream& rng, bool zero_mean)
{
    if (max_mode == 0 || max_mode >= grid.nyquist()) {
        throw std::invalid_argument("random field mode cutoff must lie in [1, N/2)");
    }
    std::vector<Complex> c(grid.spectral_size());
    if (!zero_mean) {
        c[0] = rng.normal();
    }
    for (std::size_t k = 1; k <= max_mode; ++k) {
        const auto [a, b] = rng.normal_pair();
        c[k] = Complex(a, b);
    }
    return rescale_h1(Field::from_spectral(grid, std::move(c)), h1_norm);
}

Field random_bumps(const Grid& grid, double h1_norm, RandomStream& rng)
{
    const int count = 1 + static_cast<int>(3.0 * rng.uniform()) % 3;
    const double min_width = 4.0 * grid.dx();
    const double max_width = std::max(min_width * 1.5, grid.length() / 12.0);
    std::vector<double> v(grid.modes(), 0.0);
    for (int b = 0; b < count; ++b) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double amp = sign * log_uniform(rng, 0.1, 10.0);
        const double width = log_uniform(rng, min_width, max_width);
        const double center = (rng.uniform() - 0.5) * 0.5 * grid.length();
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double r = (grid.x(j) - center) / width;
            v[j] += amp * std::exp(-r * r);
        }
    }
    return rescale_h1(Field::from_physical(grid, std::move(v)), h1_norm);
}

std::vector<Field> random_field_ensemble(const Grid& grid, std::size_t count, std::uint64_t seed, double max_h1)
{
    RandomStream rng(seed, 0x7265664669656c64ULL);
    std::vector<Field> out;
    out.reserve(count);
    const std::size_t top = grid.dealias_cutoff();
    for (std::size_t i = 0; i < count; ++i) {
        const double h1 = log_uniform(rng, 1e-2, max_h1);
        if (i % 2 == 0) {
            const auto max_mode = static_cast<std::size_t>(log_uniform(rng, 1.0, static_cast<double>(top)));
            out.push_back(random_band_limited(grid, std::max<std::size_t>(1, max_mode), h1, rng));
        } else {
            out.push_back(random_bumps(grid, h1, rng));
        }
    }
    return out;
}

Field soliton(const Grid& grid, double speed, double center)
{
    if (!(speed > 0.0)) {
        throw std::invalid_argument("soliton speed must be positive");
    }
    const double L = grid.length();
    const double k = std::sqrt(speed) / 2.0;
    return Field::sample(grid, [&](double x) {
        double r = std::remainder(x - center, L);
        const double s = 1.0 / std::cosh(k * r);
        return 3.0 * speed * s * s;
    });
}

}  // namespace skdv
