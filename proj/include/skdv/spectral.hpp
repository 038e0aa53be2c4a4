#pragma once

#include <span>
#include <vector>

#include "skdv/field.hpp"

namespace skdv {

enum class Dealias { on, off };

/// Per-mode multiplier of U_lambda(t) = exp(-lambda t) U_0(t), the flow of
/// du + (u_xxx + lambda u) dt = 0. Since F(u_xxx) = -i xi^3 u_hat, each mode
/// rotates as exp((i xi^3 - lambda) t). The Nyquist mode has no real-valued
/// dispersive partner and is only damped.
Complex semigroup_multiplier(const Grid& grid, std::size_t k, double t, double lambda);

/// Exact linear flow. Throws std::invalid_argument for t < 0 or lambda < 0.
Field apply_linear_semigroup(const Field& u, double t, double lambda);

/// Spectral derivative of order 1, 2 or 3. Odd orders zero the Nyquist mode.
Field derivative(const Field& u, int order);

/// u * u_x evaluated pseudospectrally. With dealiasing on, modes above N/3
/// are removed before the product and from the result, which makes
/// (u u_x, u) vanish to round-off for every u.
Field nonlinear_term(const Field& u, Dealias dealias = Dealias::on);

/// Squared L2 norm from stored half-spectrum coefficients.
double spectral_l2_sq(const Grid& grid, std::span<const Complex> c);
/// sum |xi_k|^(2*order) |c_k|^2 over the full spectrum.
double spectral_weighted_sq(const Grid& grid, std::span<const Complex> c, int order);

/// Reusable workspace that turns spectral coefficients into the spectral
/// coefficients of u u_x. One instance per thread.
class NonlinearEvaluator {
public:
    NonlinearEvaluator(const Grid& grid, Dealias dealias);

    /// Writes the coefficients of u u_x into out and returns max |u| over the
    /// grid of the (dealiased) input.
    double evaluate(std::span<const Complex> c, std::span<Complex> out);

    const Grid& grid() const { return grid_; }
    Dealias dealias() const { return dealias_; }

private:
    Grid grid_;
    Dealias dealias_;
    std::size_t keep_;
    std::vector<Complex> filtered_;
    std::vector<Complex> dx_filtered_;
    std::vector<double> u_;
    std::vector<double> ux_;
};

}  // namespace skdv
