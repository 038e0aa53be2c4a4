#include <gtest/gtest.h>

#include <cmath>

#include "skdv/functionals.hpp"
#include "skdv/random_fields.hpp"
#include "skdv/spectral.hpp"

using namespace skdv;

// ============================================================================
// Derivatives
// ============================================================================

TEST(Derivative, SineIsExact)
{
    const Grid g(20.0, 64);
    const double xi = g.wavenumber(4);
    const Field u = Field::sample(g, [&](double x) { return std::sin(xi * x); });
    const auto d1 = derivative(u, 1).values();
    const auto d2 = derivative(u, 2).values();
    const auto d3 = derivative(u, 3).values();
    const auto x = g.coordinates();
    for (std::size_t j = 0; j < x.size(); ++j) {
        EXPECT_NEAR(d1[j], xi * std::cos(xi * x[j]), 1e-12);
        EXPECT_NEAR(d2[j], -xi * xi * std::sin(xi * x[j]), 1e-12);
        EXPECT_NEAR(d3[j], -xi * xi * xi * std::cos(xi * x[j]), 1e-12);
    }
    EXPECT_THROW(derivative(u, 0), std::invalid_argument);
    EXPECT_THROW(derivative(u, 4), std::invalid_argument);
}

TEST(Derivative, OddOrdersDropNyquist)
{
    const Grid g(10.0, 16);
    std::vector<Complex> c(g.spectral_size());
    c.back() = 1.0;
    const Field u = Field::from_spectral(g, c);
    EXPECT_EQ(derivative(u, 1).coefficients().back(), Complex{});
    EXPECT_EQ(derivative(u, 3).coefficients().back(), Complex{});
    EXPECT_NE(derivative(u, 2).coefficients().back(), Complex{});
}

// ============================================================================
// Linear semigroup
// ============================================================================

TEST(Semigroup, ModulusAndGroupProperty)
{
    const Grid g(30.0, 64);
    for (std::size_t k = 0; k < g.spectral_size(); ++k) {
        const Complex m = semigroup_multiplier(g, k, 0.7, 0.3);
        EXPECT_NEAR(std::abs(m), std::exp(-0.3 * 0.7), 1e-15);
        const Complex m1 = semigroup_multiplier(g, k, 0.4, 0.3);
        const Complex m2 = semigroup_multiplier(g, k, 0.3, 0.3);
        // Phase round-off grows with xi^3 t.
        const double xi = g.half_wavenumbers()[k];
        EXPECT_NEAR(std::abs(m1 * m2 - m), 0.0, 1e-15 * (1.0 + std::abs(xi * xi * xi)));
    }
    EXPECT_EQ(semigroup_multiplier(g, g.nyquist(), 1.0, 0.5), Complex(std::exp(-0.5), 0.0));
}

TEST(Semigroup, SolvesAiryForOneMode)
{
    // u_t + u_xxx = 0 carries cos(xi x) to cos(xi x + xi^3 t).
    const Grid g(25.0, 64);
    const double xi = g.wavenumber(5);
    const double t = 0.37;
    const Field u0 = Field::sample(g, [&](double x) { return std::cos(xi * x); });
    const auto u = apply_linear_semigroup(u0, t, 0.0).values();
    const auto x = g.coordinates();
    for (std::size_t j = 0; j < x.size(); ++j) {
        EXPECT_NEAR(u[j], std::cos(xi * x[j] + xi * xi * xi * t), 1e-12);
    }
}

TEST(Semigroup, RejectsNegativeArguments)
{
    const Field u(Grid(10.0, 16));
    EXPECT_THROW(apply_linear_semigroup(u, -1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(apply_linear_semigroup(u, 1.0, -0.1), std::invalid_argument);
}

// ============================================================================
// Nonlinear term
// ============================================================================

TEST(Nonlinear, MatchesDirectProductForLowModes)
{
    const Grid g(20.0, 96);
    const double xi = g.wavenumber(2);
    const Field u = Field::sample(g, [&](double x) { return std::sin(xi * x); });
    const auto n = nonlinear_term(u).values();
    const auto x = g.coordinates();
    for (std::size_t j = 0; j < x.size(); ++j) {
        EXPECT_NEAR(n[j], std::sin(xi * x[j]) * xi * std::cos(xi * x[j]), 1e-12);
    }
}

TEST(Nonlinear, DealiasedTermIsOrthogonalToU)
{
    // (u u_x, u) = int (u^3/3)_x = 0; the 2/3 rule keeps this exact on the grid.
    const Grid g(40.0, 128);
    RandomStream rng(2024, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const Field u = trial % 2 ? random_band_limited(g, 63, 5.0, rng, false) : random_bumps(g, 4.0, rng);
        const Field n = nonlinear_term(u, Dealias::on);
        const double scale = std::sqrt(l2_norm_sq(n) * l2_norm_sq(u));
        EXPECT_LE(std::abs(inner(n, u)), 1e-13 * std::max(scale, 1.0)) << "trial " << trial;
        const auto c = n.coefficients();
        for (std::size_t k = g.dealias_cutoff() + 1; k < c.size(); ++k) EXPECT_EQ(c[k], Complex{});
    }
}

TEST(Nonlinear, AliasedTermBreaksOrthogonality)
{
    const Grid g(40.0, 64);
    RandomStream rng(5, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_band_limited(g, 31, 5.0, rng, false);
        worst = std::max(worst, std::abs(inner(nonlinear_term(u, Dealias::off), u)));
    }
    EXPECT_GT(worst, 1e-8);
}

TEST(Nonlinear, EvaluatorAgreesWithFreeFunction)
{
    const Grid g(40.0, 64);
    RandomStream rng(8, 0);
    const Field u = random_band_limited(g, 20, 3.0, rng);
    NonlinearEvaluator ev(g, Dealias::on);
    std::vector<Complex> out(g.spectral_size());
    const double sup = ev.evaluate(u.coefficients(), out);
    const auto want = nonlinear_term(u).coefficients();
    for (std::size_t k = 0; k < out.size(); ++k) EXPECT_NEAR(std::abs(out[k] - want[k]), 0.0, 1e-13);
    EXPECT_NEAR(sup, sup_norm(u), 1e-13);
}

// ============================================================================
// Spectral norms
// ============================================================================

TEST(SpectralNorms, WeightedSumsMatchDerivatives)
{
    const Grid g(40.0, 64);
    RandomStream rng(9, 0);
    const Field u = random_band_limited(g, 25, 2.0, rng);
    const auto c = u.coefficients();
    EXPECT_NEAR(spectral_weighted_sq(g, c, 1), l2_norm_sq(derivative(u, 1)), 1e-12);
    EXPECT_NEAR(spectral_weighted_sq(g, c, 2), l2_norm_sq(derivative(u, 2)), 1e-11);
    EXPECT_NEAR(spectral_weighted_sq(g, c, 0), spectral_l2_sq(g, c), 1e-14);
}
