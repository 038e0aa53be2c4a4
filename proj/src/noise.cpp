#include "skdv/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace skdv {

NoiseOperator::NoiseOperator(const Grid& grid) : grid_(grid), phi_(grid.spectral_size())
{
}

NoiseOperator NoiseOperator::sobolev(const Grid& grid, double amplitude, double decay, std::size_t cutoff_mode)
{
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("noise amplitude must be nonnegative");
    }
    if (cutoff_mode == 0 && !(decay >= 4.0)) {
        throw std::invalid_argument("noise decay exponent must be >= 4 without a hard cutoff");
    }
    if (!(decay >= 0.0)) {
        throw std::invalid_argument("noise decay exponent must be nonnegative");
    }
    NoiseOperator op(grid);
    op.amplitude_ = amplitude;
    op.decay_ = decay;
    op.cutoff_ = cutoff_mode;
    const auto& xi = grid.half_wavenumbers();
    // The Nyquist mode stays silent: it cannot carry a real dispersive wave.
    for (std::size_t k = 0; k < grid.nyquist(); ++k) {
        if (cutoff_mode > 0 && k > cutoff_mode) {
            break;
        }
        op.phi_[k] = amplitude * std::pow(1.0 + xi[k] * xi[k], -0.5 * decay);
    }
    return op;
}

NoiseOperator NoiseOperator::with_hs_norm(const Grid& grid, double hs_target, double decay, std::size_t cutoff_mode)
{
    if (!(hs_target >= 0.0)) {
        throw std::invalid_argument("target Hilbert-Schmidt norm must be nonnegative");
    }
    const NoiseOperator unit = sobolev(grid, 1.0, decay, cutoff_mode);
    return sobolev(grid, hs_target / hs_norm(unit), decay, cutoff_mode);
}

NoiseOperator NoiseOperator::from_amplitudes(const Grid& grid, std::vector<Complex> amplitudes)
{
    if (amplitudes.size() != grid.spectral_size()) {
        throw std::invalid_argument("noise amplitude count does not match grid");
    }
    if (amplitudes[0].imag() != 0.0 || amplitudes[grid.nyquist()] != Complex{}) {
        throw std::invalid_argument("zero-mode amplitude must be real and Nyquist amplitude zero");
    }
    NoiseOperator op(grid);
    op.phi_ = std::move(amplitudes);
    return op;
}

bool NoiseOperator::is_zero() const
{
    for (const auto& p : phi_) {
        if (p != Complex{}) {
            return false;
        }
    }
    return true;
}

NoiseOperator NoiseOperator::scaled(double factor) const
{
    NoiseOperator op = *this;
    op.amplitude_ *= std::abs(factor);
    for (auto& p : op.phi_) {
        p *= factor;
    }
    return op;
}

double hs_norm(const NoiseOperator& phi, double sobolev_order)
{
    if (!(sobolev_order >= 0.0)) {
        throw std::invalid_argument("Sobolev order must be nonnegative");
    }
    const Grid& g = phi.grid();
    const auto& xi = g.half_wavenumbers();
    const auto amp = phi.amplitudes();
    double s = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        s += g.multiplicity(k) * std::pow(1.0 + xi[k] * xi[k], sobolev_order) * std::norm(amp[k]);
    }
    return std::sqrt(s);
}

double dx_hs_norm(const NoiseOperator& phi)
{
    const Grid& g = phi.grid();
    const auto& xi = g.half_wavenumbers();
    const auto amp = phi.amplitudes();
    double s = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
        s += g.multiplicity(k) * xi[k] * xi[k] * std::norm(amp[k]);
    }
    return std::sqrt(s);
}

double convolution_variance_factor(double dt, double lambda)
{
    if (!(dt >= 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("dt and lambda must be nonnegative");
    }
    if (lambda * dt < 1e-12) {
        return dt;
    }
    return -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
}

void add_gaussian_modes(std::span<Complex> c, std::span<const Complex> scale, RandomStream& rng)
{
    const std::size_t last = c.size() - 1;
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto [a, b] = rng.normal_pair();
        if (k == 0 || k == last) {
            c[k] += scale[k] * a;
        } else {
            c[k] += scale[k] * Complex(a * inv_sqrt2, b * inv_sqrt2);
        }
    }
}

namespace {

Field sample_scaled(const NoiseOperator& phi, double variance_factor, RandomStream& rng)
{
    const Grid& g = phi.grid();
    std::vector<Complex> c(g.spectral_size());
    if (variance_factor == 0.0 || phi.is_zero()) {
        return Field::from_spectral(g, std::move(c));
    }
    const double sd = std::sqrt(variance_factor);
    std::vector<Complex> scale(phi.amplitudes().begin(), phi.amplitudes().end());
    for (auto& s : scale) {
        s *= sd;
    }
    add_gaussian_modes(c, scale, rng);
    return Field::from_spectral(g, std::move(c));
}

}  // namespace

Field sample_increment(const NoiseOperator& phi, double dt, RandomStream& rng)
{
    if (!(dt >= 0.0)) {
        throw std::invalid_argument("increment dt must be nonnegative");
    }
    return sample_scaled(phi, dt, rng);
}

Field sample_stochastic_convolution_step(const NoiseOperator& phi, double dt, double lambda, RandomStream& rng)
{
    return sample_scaled(phi, convolution_variance_factor(dt, lambda), rng);
}

ForcingShape parse_forcing_shape(const std::string& name)
{
    if (name == "zero") return ForcingShape::zero;
    if (name == "gaussian-bump") return ForcingShape::gaussian_bump;
    if (name == "band-limited-random") return ForcingShape::band_limited_random;
    throw std::invalid_argument("unsupported forcing shape '" + name + "'");
}

std::string to_string(ForcingShape shape)
{
    switch (shape) {
    case ForcingShape::zero: return "zero";
    case ForcingShape::gaussian_bump: return "gaussian-bump";
    case ForcingShape::band_limited_random: return "band-limited-random";
    }
    return "unknown";
}

Field build_forcing(const ForcingSpec& spec, const Grid& grid)
{
    switch (spec.shape) {
    case ForcingShape::zero:
        return Field(grid);
    case ForcingShape::gaussian_bump: {
        if (!(spec.width > 0.0)) {
            throw std::invalid_argument("gaussian forcing width must be positive");
        }
        const double a = spec.amplitude;
        const double w = spec.width;
        const double x0 = spec.center;
        return Field::sample(grid, [&](double x) {
            const double r = (x - x0) / w;
            return a * std::exp(-r * r);
        });
    }
    case ForcingShape::band_limited_random: {
        if (spec.cutoff_mode == 0 || spec.cutoff_mode >= grid.nyquist()) {
            throw std::invalid_argument("band-limited forcing cutoff must lie in [1, N/2)");
        }
        RandomStream rng(spec.seed, 0);
        std::vector<Complex> c(grid.spectral_size());
        double norm_sq = 0.0;
        for (std::size_t k = 1; k <= spec.cutoff_mode; ++k) {
            const auto [a, b] = rng.normal_pair();
            c[k] = Complex(a, b);
            norm_sq += 2.0 * std::norm(c[k]);
        }
        const double scale = spec.amplitude / std::sqrt(norm_sq);
        for (auto& z : c) {
            z *= scale;
        }
        return Field::from_spectral(grid, std::move(c));
    }
    }
    throw std::invalid_argument("unsupported forcing shape");
}

}  // namespace skdv
