#pragma once

#include <complex>
#include <span>
#include <vector>

#include "skdv/grid.hpp"

namespace skdv {

using Complex = std::complex<double>;

/// Real scalar field on a periodic grid.
///
/// A Field is immutable once built and carries exactly one authoritative
/// representation: N physical samples or the N/2+1 stored spectral
/// coefficients. The other view is computed on demand.
///
/// Spectral coefficients are L2-orthonormal basis coefficients,
/// c_k = (u, e_k) with e_k(x) = exp(i xi_k (x + L/2)) / sqrt(L). With this
/// convention ||u||^2 = sum over all k of |c_k|^2, and the grid quadrature of
/// u^2 reproduces that sum exactly.
class Field {
public:
    enum class Representation { physical, spectral };

    /// Zero field (spectral).
    explicit Field(const Grid& grid);

    static Field from_physical(const Grid& grid, std::vector<double> values);
    /// Stored half-spectrum (index 0..N/2). The zero and Nyquist coefficients
    /// must be real up to round-off; small imaginary residue is dropped.
    static Field from_spectral(const Grid& grid, std::vector<Complex> coefficients);

    template <typename Fn>
    static Field sample(const Grid& grid, Fn&& fn)
    {
        std::vector<double> v(grid.modes());
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] = fn(grid.x(j));
        }
        return from_physical(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    Representation representation() const { return rep_; }

    /// Physical samples (converted if the field is spectral).
    std::vector<double> values() const;
    /// Stored half-spectrum (converted if the field is physical).
    std::vector<Complex> coefficients() const;

    /// Direct access to the authoritative storage; throws std::logic_error
    /// when the requested view is not the authoritative one.
    std::span<const double> physical_view() const;
    std::span<const Complex> spectral_view() const;

    /// Coefficient for a signed mode k in [-N/2, N/2), via conjugate symmetry.
    Complex coefficient(long k) const;

    Field to_physical() const;
    Field to_spectral() const;

    /// Moves the spectral storage out; the field is left as the zero field.
    std::vector<Complex> release_coefficients() &&;

    Field operator+(const Field& other) const;
    Field operator-(const Field& other) const;
    Field operator*(double scale) const;

private:
    Field(const Grid& grid, Representation rep) : grid_(grid), rep_(rep) {}

    Grid grid_;
    Representation rep_;
    std::vector<double> physical_;
    std::vector<Complex> spectral_;
};

inline Field operator*(double scale, const Field& f) { return f * scale; }

}  // namespace skdv
