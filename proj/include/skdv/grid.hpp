#pragma once

#include <cstddef>
#include <vector>

namespace skdv {

/// Uniform periodic grid on [-L/2, L/2) with N samples.
///
/// Spectral data is stored in the real-to-complex half layout: index k runs
/// over 0..N/2 and stands for wavenumber xi_k = 2*pi*k/L; negative modes are
/// the complex conjugates and are never stored.
class Grid {
public:
    Grid(double length, std::size_t modes);

    double length() const { return length_; }
    std::size_t modes() const { return modes_; }
    std::size_t spectral_size() const { return modes_ / 2 + 1; }
    std::size_t nyquist() const { return modes_ / 2; }
    double dx() const { return length_ / static_cast<double>(modes_); }

    /// Physical coordinate of sample j.
    double x(std::size_t j) const;
    std::vector<double> coordinates() const;

    /// xi_k for a signed mode index k in [-N/2, N/2).
    double wavenumber(long k) const;
    /// xi_k for the stored half-spectrum indices 0..N/2.
    const std::vector<double>& half_wavenumbers() const { return xi_; }

    /// Highest mode retained by the 2/3 dealiasing rule.
    std::size_t dealias_cutoff() const { return modes_ / 3; }

    /// Multiplicity of a stored index in the full spectrum (1 for zero and
    /// Nyquist, 2 otherwise).
    double multiplicity(std::size_t k) const { return (k == 0 || k == nyquist()) ? 1.0 : 2.0; }

    bool operator==(const Grid& other) const
    {
        return length_ == other.length_ && modes_ == other.modes_;
    }

private:
    double length_;
    std::size_t modes_;
    std::vector<double> xi_;
};

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace skdv
