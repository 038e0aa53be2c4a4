#include "skdv/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace skdv {

Grid::Grid(double length, std::size_t modes) : length_(length), modes_(modes)
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("grid length must be positive and finite");
    }
    if (modes < 8 || modes % 2 != 0) {
        throw std::invalid_argument("grid mode count must be even and >= 8, got " + std::to_string(modes));
    }
    xi_.resize(spectral_size());
    for (std::size_t k = 0; k < xi_.size(); ++k) {
        xi_[k] = wavenumber(static_cast<long>(k));
    }
}

double Grid::x(std::size_t j) const
{
    return -0.5 * length_ + static_cast<double>(j) * dx();
}

std::vector<double> Grid::coordinates() const
{
    std::vector<double> xs(modes_);
    for (std::size_t j = 0; j < modes_; ++j) {
        xs[j] = x(j);
    }
    return xs;
}

double Grid::wavenumber(long k) const
{
    return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

void require_same_grid(const Grid& a, const Grid& b)
{
    if (!(a == b)) {
        throw std::invalid_argument("fields live on different grids");
    }
}

}  // namespace skdv
