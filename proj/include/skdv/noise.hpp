#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skdv/field.hpp"
#include "skdv/rng.hpp"

namespace skdv {

/// Fourier-diagonal Hilbert-Schmidt operator: Phi e_k = phi_k e_k for the
/// orthonormal exponentials e_k, with phi_{-k} = conj(phi_k). Amplitudes are
/// stored on the half spectrum like Field coefficients.
class NoiseOperator {
public:
    /// Phi = 0.
    explicit NoiseOperator(const Grid& grid);

    /// |phi_k| = amplitude * (1 + xi_k^2)^(-decay/2), zero above cutoff_mode
    /// when cutoff_mode > 0. Requires decay >= 4 unless a cutoff is given.
    static NoiseOperator sobolev(const Grid& grid, double amplitude, double decay, std::size_t cutoff_mode = 0);
    /// Same profile with the amplitude chosen so ||Phi||_HS(L2,L2) = hs_target.
    static NoiseOperator with_hs_norm(const Grid& grid, double hs_target, double decay, std::size_t cutoff_mode = 0);
    static NoiseOperator from_amplitudes(const Grid& grid, std::vector<Complex> amplitudes);

    const Grid& grid() const { return grid_; }
    std::span<const Complex> amplitudes() const { return phi_; }
    bool is_zero() const;

    double amplitude() const { return amplitude_; }
    double decay() const { return decay_; }
    std::size_t cutoff_mode() const { return cutoff_; }

    NoiseOperator scaled(double factor) const;

private:
    Grid grid_;
    std::vector<Complex> phi_;
    double amplitude_ = 0.0;
    double decay_ = 0.0;
    std::size_t cutoff_ = 0;
};

/// (sum_k (1 + xi_k^2)^m |phi_k|^2)^(1/2) over the full spectrum, m >= 0.
double hs_norm(const NoiseOperator& phi, double sobolev_order = 0.0);
/// ||d/dx Phi||_HS(L2,L2) = (sum_k xi_k^2 |phi_k|^2)^(1/2).
double dx_hs_norm(const NoiseOperator& phi);

/// Phi (W(t+dt) - W(t)): mode k is a centred Gaussian with E|c_k|^2 = |phi_k|^2 dt.
Field sample_increment(const NoiseOperator& phi, double dt, RandomStream& rng);

/// int_t^{t+dt} U_lambda(t+dt-s) Phi dW_s sampled exactly; per mode
/// E|c_k|^2 = |phi_k|^2 (1 - exp(-2 lambda dt)) / (2 lambda), -> |phi_k|^2 dt as lambda -> 0.
Field sample_stochastic_convolution_step(const NoiseOperator& phi, double dt, double lambda, RandomStream& rng);

/// Per-mode variance factor of one exact convolution step.
double convolution_variance_factor(double dt, double lambda);

/// Adds sum_k scale_k z_k e_k to c, with z_k standard complex Gaussian
/// (real for the zero and Nyquist modes). One normal pair is drawn per stored
/// mode so the stream advances identically for every noise profile.
void add_gaussian_modes(std::span<Complex> c, std::span<const Complex> scale, RandomStream& rng);

enum class ForcingShape { zero, gaussian_bump, band_limited_random };

ForcingShape parse_forcing_shape(const std::string& name);
std::string to_string(ForcingShape shape);

struct ForcingSpec {
    ForcingShape shape = ForcingShape::zero;
    double amplitude = 0.0;
    /// Gaussian width w in a * exp(-(x - center)^2 / w^2).
    double width = 5.0;
    double center = 0.0;
    /// Highest mode of the band-limited random profile.
    std::size_t cutoff_mode = 8;
    /// Seed for the band-limited random profile.
    std::uint64_t seed = 1;
};

/// Realizes f on the grid. Band-limited profiles are zero-mean and scaled to
/// ||f||_L2 = amplitude.
Field build_forcing(const ForcingSpec& spec, const Grid& grid);

}  // namespace skdv
