#include "skdv/field.hpp"

#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace skdv {

Field::Field(const Grid& grid) : grid_(grid), rep_(Representation::spectral), spectral_(grid.spectral_size())
{
}

Field Field::from_physical(const Grid& grid, std::vector<double> values)
{
    if (values.size() != grid.modes()) {
        throw std::invalid_argument("physical sample count does not match grid");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("field samples must be finite");
        }
    }
    Field f(grid, Representation::physical);
    f.physical_ = std::move(values);
    return f;
}

Field Field::from_spectral(const Grid& grid, std::vector<Complex> coefficients)
{
    if (coefficients.size() != grid.spectral_size()) {
        throw std::invalid_argument("spectral coefficient count does not match grid");
    }
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        norm_sq += grid.multiplicity(k) * std::norm(coefficients[k]);
    }
    if (!std::isfinite(norm_sq)) {
        throw std::invalid_argument("spectral coefficients must be finite");
    }
    const double tol = 1e-12 * std::max(1.0, std::sqrt(norm_sq));
    for (std::size_t k : {std::size_t{0}, grid.nyquist()}) {
        if (std::abs(coefficients[k].imag()) > tol) {
            throw std::invalid_argument("zero and Nyquist coefficients of a real field must be real");
        }
        coefficients[k].imag(0.0);
    }
    Field f(grid, Representation::spectral);
    f.spectral_ = std::move(coefficients);
    return f;
}

std::vector<double> Field::values() const
{
    if (rep_ == Representation::physical) {
        return physical_;
    }
    std::vector<double> out(grid_.modes());
    fft::inverse(grid_, spectral_, out);
    return out;
}

std::vector<Complex> Field::coefficients() const
{
    if (rep_ == Representation::spectral) {
        return spectral_;
    }
    std::vector<Complex> out(grid_.spectral_size());
    fft::forward(grid_, physical_, out);
    out.front().imag(0.0);
    out.back().imag(0.0);
    return out;
}

std::span<const double> Field::physical_view() const
{
    if (rep_ != Representation::physical) {
        throw std::logic_error("field is not in physical representation");
    }
    return physical_;
}

std::span<const Complex> Field::spectral_view() const
{
    if (rep_ != Representation::spectral) {
        throw std::logic_error("field is not in spectral representation");
    }
    return spectral_;
}

Complex Field::coefficient(long k) const
{
    const long half = static_cast<long>(grid_.nyquist());
    if (k < -half || k >= half) {
        throw std::out_of_range("mode index outside [-N/2, N/2)");
    }
    const auto get = [this](std::size_t idx) {
        if (rep_ == Representation::spectral) {
            return spectral_[idx];
        }
        return coefficients()[idx];
    };
    if (k >= 0) {
        return get(static_cast<std::size_t>(k));
    }
    return std::conj(get(static_cast<std::size_t>(-k)));
}

Field Field::to_physical() const
{
    if (rep_ == Representation::physical) {
        return *this;
    }
    return from_physical(grid_, values());
}

Field Field::to_spectral() const
{
    if (rep_ == Representation::spectral) {
        return *this;
    }
    Field f(grid_, Representation::spectral);
    f.spectral_ = coefficients();
    return f;
}

std::vector<Complex> Field::release_coefficients() &&
{
    if (rep_ != Representation::spectral) {
        spectral_ = coefficients();
        physical_.clear();
        rep_ = Representation::spectral;
    }
    std::vector<Complex> out = std::move(spectral_);
    spectral_.assign(grid_.spectral_size(), Complex{});
    return out;
}

Field Field::operator+(const Field& other) const
{
    require_same_grid(grid_, other.grid_);
    if (rep_ == Representation::physical && other.rep_ == Representation::physical) {
        std::vector<double> v = physical_;
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] += other.physical_[j];
        }
        return from_physical(grid_, std::move(v));
    }
    std::vector<Complex> c = coefficients();
    const std::vector<Complex> d = other.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] += d[k];
    }
    return from_spectral(grid_, std::move(c));
}

Field Field::operator-(const Field& other) const
{
    return *this + other * -1.0;
}

Field Field::operator*(double scale) const
{
    Field f = *this;
    for (auto& v : f.physical_) {
        v *= scale;
    }
    for (auto& c : f.spectral_) {
        c *= scale;
    }
    return f;
}

}  // namespace skdv
