#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "skdv/functionals.hpp"
#include "skdv/noise.hpp"
#include "skdv/rng.hpp"
#include "skdv/statistics.hpp"

using namespace skdv;

// ============================================================================
// Random streams
// ============================================================================

TEST(RandomStream, DeterminedBySeedAndIndex)
{
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    RandomStream c(42, 8);
    RandomStream d(43, 7);
    bool differs_c = false;
    bool differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        differs_c = differs_c || x != c.uniform();
        differs_d = differs_d || x != d.uniform();
    }
    EXPECT_TRUE(differs_c);
    EXPECT_TRUE(differs_d);
}

TEST(RandomStream, UniformRangeAndNormalMoments)
{
    RandomStream r(1, 0);
    std::vector<double> z;
    for (int i = 0; i < 200000; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        const auto [a, b] = r.normal_pair();
        z.push_back(a);
        z.push_back(b);
    }
    const Estimate m = mean_and_se(z);
    EXPECT_LT(std::abs(m.mean), 4.0 * m.se);
    std::vector<double> sq;
    for (double v : z) sq.push_back(v * v);
    const Estimate v = mean_and_se(sq);
    EXPECT_LT(std::abs(v.mean - 1.0), 4.0 * v.se);
}

TEST(RandomStream, SerializedStateContinuesExactly)
{
    RandomStream a(9, 3);
    for (int i = 0; i < 17; ++i) (void)a.normal();
    RandomStream b = RandomStream::deserialize(a.serialize());
    EXPECT_EQ(a, b);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(a.normal(), b.normal());
    EXPECT_THROW(RandomStream::deserialize("not a state"), std::runtime_error);
}

// ============================================================================
// Noise operator
// ============================================================================

TEST(NoiseOperator, SobolevProfileAndNorm)
{
    const Grid g(100.0, 128);
    const NoiseOperator phi = NoiseOperator::with_hs_norm(g, 0.1, 4.0);
    EXPECT_NEAR(hs_norm(phi), 0.1, 1e-14);
    const auto a = phi.amplitudes();
    EXPECT_EQ(a.back(), Complex{});
    const auto& xi = g.half_wavenumbers();
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        EXPECT_NEAR(std::abs(a[k]) / std::abs(a[0]), std::pow(1.0 + xi[k] * xi[k], -2.0), 1e-14);
    }
    EXPECT_TRUE(NoiseOperator(g).is_zero());
    EXPECT_NEAR(hs_norm(phi.scaled(3.0)), 0.3, 1e-14);
    double dx = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dx += g.multiplicity(k) * xi[k] * xi[k] * std::norm(a[k]);
    EXPECT_NEAR(dx_hs_norm(phi), std::sqrt(dx), 1e-15);
}

TEST(NoiseOperator, RejectsRoughProfilesWithoutCutoff)
{
    const Grid g(100.0, 64);
    EXPECT_THROW(NoiseOperator::sobolev(g, 1.0, 2.0), std::invalid_argument);
    EXPECT_NO_THROW(NoiseOperator::sobolev(g, 1.0, 2.0, 10));
    const NoiseOperator cut = NoiseOperator::sobolev(g, 1.0, 4.0, 5);
    for (std::size_t k = 6; k < g.spectral_size(); ++k) EXPECT_EQ(cut.amplitudes()[k], Complex{});
    std::vector<Complex> bad(g.spectral_size(), 0.1);
    EXPECT_THROW(NoiseOperator::from_amplitudes(g, bad), std::invalid_argument);
}

TEST(NoiseOperator, VarianceFactor)
{
    EXPECT_NEAR(convolution_variance_factor(0.01, 0.5), -std::expm1(-0.01) / 1.0, 1e-18);
    EXPECT_EQ(convolution_variance_factor(0.01, 0.0), 0.01);
    EXPECT_NEAR(convolution_variance_factor(0.01, 1e-14), 0.01, 1e-15);
}

TEST(NoiseOperator, IncrementVariancePerMode)
{
    const Grid g(20.0, 16);
    const NoiseOperator phi = NoiseOperator::sobolev(g, 1.0, 4.0);
    RandomStream rng(77, 0);
    const double dt = 0.02;
    const std::size_t draws = 40000;
    std::vector<std::vector<double>> sq(g.spectral_size());
    for (std::size_t i = 0; i < draws; ++i) {
        const auto c = sample_increment(phi, dt, rng).coefficients();
        for (std::size_t k = 0; k < c.size(); ++k) sq[k].push_back(std::norm(c[k]));
    }
    for (std::size_t k = 0; k + 1 < g.spectral_size(); ++k) {
        const Estimate e = mean_and_se(sq[k]);
        EXPECT_LT(std::abs(e.mean - std::norm(phi.amplitudes()[k]) * dt), 4.0 * e.se) << "mode " << k;
    }
}

TEST(NoiseOperator, StreamAdvancesIndependentlyOfProfile)
{
    // A cutoff zeroes amplitudes but keeps the draw count, so truncating the
    // noise leaves the lower modes' paths unchanged.
    const Grid g(20.0, 16);
    RandomStream a(5, 0);
    RandomStream b(5, 0);
    const NoiseOperator pf = NoiseOperator::sobolev(g, 1.0, 4.0);
    const NoiseOperator pc = NoiseOperator::sobolev(g, 1.0, 4.0, 3);
    const auto full = sample_increment(pf, 0.1, a).coefficients();
    const auto cut = sample_increment(pc, 0.1, b).coefficients();
    EXPECT_EQ(a, b);
    for (std::size_t k = 0; k <= 3; ++k) {
        const Complex zf = full[k] / pf.amplitudes()[k];
        const Complex zc = cut[k] / pc.amplitudes()[k];
        EXPECT_NEAR(std::abs(zf - zc), 0.0, 1e-13);
    }

    // The zero operator draws nothing.
    RandomStream c(5, 0);
    (void)sample_increment(NoiseOperator(g), 0.1, c);
    EXPECT_EQ(c, RandomStream(5, 0));
}

// ============================================================================
// Forcing
// ============================================================================

TEST(Forcing, ShapesAndNames)
{
    for (auto s : {ForcingShape::zero, ForcingShape::gaussian_bump, ForcingShape::band_limited_random}) {
        EXPECT_EQ(parse_forcing_shape(to_string(s)), s);
    }
    EXPECT_THROW(parse_forcing_shape("triangle"), std::invalid_argument);

    const Grid g(100.0, 256);
    ForcingSpec bump{ForcingShape::gaussian_bump, 2.0, 5.0, 10.0};
    const Field f = build_forcing(bump, g);
    const auto v = f.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r = (g.x(j) - 10.0) / 5.0;
        EXPECT_NEAR(v[j], 2.0 * std::exp(-r * r), 1e-12);
    }

    // Discrete ||f||^2 of a unit bump on a fine grid matches sqrt(pi/2) w.
    const Field fine = build_forcing({ForcingShape::gaussian_bump, 1.0, 5.0}, Grid(100.0, 1024));
    EXPECT_NEAR(l2_norm_sq(fine) / (std::sqrt(std::numbers::pi / 2.0) * 5.0), 1.0, 1e-6);

    ForcingSpec rnd{ForcingShape::band_limited_random, 0.5};
    rnd.cutoff_mode = 6;
    const Field fr = build_forcing(rnd, g);
    EXPECT_NEAR(std::sqrt(l2_norm_sq(fr)), 0.5, 1e-13);
    EXPECT_NEAR(mean_value(fr), 0.0, 1e-15);
    EXPECT_EQ(l2_norm_sq(build_forcing(ForcingSpec{}, g)), 0.0);
}
