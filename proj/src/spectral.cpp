#include "skdv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace skdv {

Complex semigroup_multiplier(const Grid& grid, std::size_t k, double t, double lambda)
{
    const double decay = std::exp(-lambda * t);
    if (k == grid.nyquist()) {
        return {decay, 0.0};
    }
    const double xi = grid.half_wavenumbers()[k];
    return std::polar(decay, xi * xi * xi * t);
}

Field apply_linear_semigroup(const Field& u, double t, double lambda)
{
    if (!(t >= 0.0)) {
        throw std::invalid_argument("semigroup time must be nonnegative");
    }
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("damping must be nonnegative");
    }
    const Grid& g = u.grid();
    std::vector<Complex> c = u.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] *= semigroup_multiplier(g, k, t, lambda);
    }
    return Field::from_spectral(g, std::move(c));
}

Field derivative(const Field& u, int order)
{
    if (order < 1 || order > 3) {
        throw std::invalid_argument("derivative order must be 1, 2 or 3");
    }
    const Grid& g = u.grid();
    std::vector<Complex> c = u.coefficients();
    const auto& xi = g.half_wavenumbers();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k == g.nyquist() && order % 2 == 1) {
            c[k] = 0.0;
            continue;
        }
        c[k] *= std::pow(Complex(0.0, xi[k]), order);
    }
    return Field::from_spectral(g, std::move(c));
}

Field nonlinear_term(const Field& u, Dealias dealias)
{
    NonlinearEvaluator eval(u.grid(), dealias);
    const std::vector<Complex> c = u.coefficients();
    std::vector<Complex> out(c.size());
    eval.evaluate(c, out);
    return Field::from_spectral(u.grid(), std::move(out));
}

double spectral_l2_sq(const Grid& grid, std::span<const Complex> c)
{
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        s += grid.multiplicity(k) * std::norm(c[k]);
    }
    return s;
}

double spectral_weighted_sq(const Grid& grid, std::span<const Complex> c, int order)
{
    const auto& xi = grid.half_wavenumbers();
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        double w = 1.0;
        for (int i = 0; i < order; ++i) {
            w *= xi[k] * xi[k];
        }
        s += grid.multiplicity(k) * w * std::norm(c[k]);
    }
    return s;
}

NonlinearEvaluator::NonlinearEvaluator(const Grid& grid, Dealias dealias)
    : grid_(grid),
      dealias_(dealias),
      keep_(dealias == Dealias::on ? grid.dealias_cutoff() : grid.nyquist()),
      filtered_(grid.spectral_size()),
      dx_filtered_(grid.spectral_size()),
      u_(grid.modes()),
      ux_(grid.modes())
{
}

double NonlinearEvaluator::evaluate(std::span<const Complex> c, std::span<Complex> out)
{
    const auto& xi = grid_.half_wavenumbers();
    const std::size_t n = c.size();
    for (std::size_t k = 0; k < n; ++k) {
        const bool kept = k <= keep_;
        filtered_[k] = kept ? c[k] : Complex{};
        // Odd derivative of the Nyquist mode is not representable as a real field.
        dx_filtered_[k] = (kept && k != grid_.nyquist()) ? Complex(0.0, xi[k]) * c[k] : Complex{};
    }
    fft::inverse(grid_, filtered_, u_);
    fft::inverse(grid_, dx_filtered_, ux_);
    double sup = 0.0;
    for (std::size_t j = 0; j < u_.size(); ++j) {
        sup = std::max(sup, std::abs(u_[j]));
        u_[j] *= ux_[j];
    }
    fft::forward(grid_, u_, out);
    out[0].imag(0.0);
    for (std::size_t k = keep_ + 1; k < n; ++k) {
        out[k] = Complex{};
    }
    out[grid_.nyquist()].imag(0.0);
    return sup;
}

}  // namespace skdv
