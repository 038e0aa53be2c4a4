#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "skdv/measures.hpp"
#include "skdv/random_fields.hpp"

using namespace skdv;

namespace {

SimParams small()
{
    SimParams p;
    p.length = 50.0;
    p.modes = 64;
    p.lambda = 0.5;
    p.forcing = {ForcingShape::gaussian_bump, 1.0, 5.0};
    p.noise.hs_norm = 0.5;
    p.dt = 0.01;
    p.seed = 4;
    return p;
}

KbOptions replicas(std::size_t n)
{
    KbOptions o;
    o.replicas = n;
    o.threads = 1;
    return o;
}

/// Measure of `count` copies of u spread over two replicas.
EmpiricalMeasure point_mass(const Field& u, std::size_t count)
{
    EmpiricalMeasure mu;
    mu.grid = u.grid();
    mu.horizon = static_cast<double>(count);
    mu.stride = 1.0;
    const auto c = u.coefficients();
    const FunctionalEvaluator eval(Field(u.grid()), NoiseOperator(u.grid()), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        Snapshot s;
        s.replica = i < count / 2 ? 0 : 1;
        s.t = static_cast<double>(i + 1);
        s.functionals = eval(s.t, u);
        s.coefficients.assign(c.begin(), c.end());
        mu.snapshots.push_back(std::move(s));
    }
    return mu;
}

}  // namespace

// ============================================================================
// Krylov-Bogoliubov averages
// ============================================================================

TEST(KbAverage, SnapshotLayout)
{
    const EmpiricalMeasure mu = kb_average(small(), 1.0, 0.1, replicas(3));
    ASSERT_EQ(mu.size(), 30u);
    EXPECT_EQ(mu.replicas(), (std::vector<std::uint64_t>{0, 1, 2}));
    EXPECT_TRUE(mu.has_coefficients());
    EXPECT_NEAR(mu.snapshots.front().t, 0.1, 1e-12);
    EXPECT_NEAR(mu.snapshots[9].t, 1.0, 1e-12);
    EXPECT_EQ(mu.truncated(0.5).size(), 15u);
    EXPECT_NO_THROW(mu.validate());
}

TEST(KbAverage, ReplicaPrefixAndBurnIn)
{
    const EmpiricalMeasure a = kb_average(small(), 1.0, 0.1, replicas(3));
    const EmpiricalMeasure b = kb_average(small(), 1.0, 0.1, replicas(2));
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a.snapshots[i].coefficients, b.snapshots[i].coefficients);

    KbOptions o = replicas(2);
    o.burn_in = 0.5;
    o.keep_coefficients = false;
    const EmpiricalMeasure c = kb_average(small(), 1.0, 0.1, o);
    EXPECT_EQ(c.size(), 12u);
    EXPECT_FALSE(c.has_coefficients());
    EXPECT_THROW(tail_mass(c, 1), std::invalid_argument);
}

TEST(KbAverage, RejectsBadStrides)
{
    EXPECT_THROW(kb_average(small(), 1.0, 2.0, replicas(1)), std::invalid_argument);
    EXPECT_THROW(kb_average(small(), 1.0, 0.015, replicas(1)), std::invalid_argument);
    EXPECT_THROW(kb_average(small(), 0.0, 0.1, replicas(1)), std::invalid_argument);
    EXPECT_THROW(kb_average(small(), 1.0, 0.1, replicas(0)), std::invalid_argument);
}

// ============================================================================
// Tail mass and increments
// ============================================================================

TEST(TailMass, MonotoneAndTotal)
{
    const EmpiricalMeasure mu = kb_average(small(), 1.0, 0.1, replicas(3));
    double total = 0.0;
    for (const auto& s : mu.snapshots) total += s.functionals.l2_sq;
    total /= static_cast<double>(mu.size());
    EXPECT_NEAR(tail_mass(mu, 0).mean, total, 1e-12 * total);
    double prev = tail_mass(mu, 0).mean;
    for (std::size_t n : {1, 2, 4, 8, 16, 32}) {
        const double t = tail_mass(mu, n).mean;
        EXPECT_LE(t, prev);
        prev = t;
    }
    EXPECT_THROW(tail_mass(mu, 64), std::invalid_argument);
}

TEST(TailMass, BandLimitedPointMass)
{
    const Grid g(40.0, 64);
    RandomStream rng(2, 0);
    const Field u = random_band_limited(g, 5, 1.0, rng, false);
    const EmpiricalMeasure mu = point_mass(u, 6);
    EXPECT_EQ(tail_mass(mu, 6).mean, 0.0);
    EXPECT_NEAR(tail_mass(mu, 0).mean, l2_norm_sq(u), 1e-12);
    EXPECT_EQ(tail_mass(mu, 0).se, 0.0);
}

TEST(Increments, ZeroLagAndPointMass)
{
    const EmpiricalMeasure mu = kb_average(small(), 1.0, 0.1, replicas(2));
    EXPECT_EQ(increment_moment(mu, 0.0).mean, 0.0);
    EXPECT_GT(increment_moment(mu, 0.1).mean, 0.0);
    EXPECT_THROW(increment_moment(mu, 0.15), std::invalid_argument);
    EXPECT_THROW(increment_moment(mu, 5.0), std::invalid_argument);
    const Grid g(40.0, 64);
    EXPECT_EQ(increment_moment(point_mass(soliton(g, 1.0, 0.0), 6), 1.0).mean, 0.0);
}

// ============================================================================
// Discounted energy identity
// ============================================================================

TEST(EnergyIdentity, ClosedFormPath)
{
    // With (z, f) = g constant, ||z_t||^2 = e^{-2 l t} a + (2g + s)(1 - e^{-2 l t}) / (2 l).
    const double lambda = 0.3, g = 1.7, s2 = 0.4, a = 2.0;
    std::vector<double> t, l2, uf;
    for (int i = 0; i <= 2000; ++i) {
        const double ti = 1e-3 * i;
        t.push_back(ti);
        uf.push_back(g);
        l2.push_back(std::exp(-2 * lambda * ti) * a + (2 * g + s2) * -std::expm1(-2 * lambda * ti) / (2 * lambda));
    }
    EXPECT_NEAR(energy_identity_residual(t, l2, uf, 0, 2.0, lambda, s2), 0.0, 1e-6);
    EXPECT_NEAR(energy_identity_residual(t, l2, uf, 500, 1.0, lambda, s2), 0.0, 1e-6);
    EXPECT_EQ(energy_identity_residual(t, l2, uf, 700, 0.0, lambda, s2), 0.0);
    EXPECT_THROW(energy_identity_residual(t, l2, uf, 1500, 1.0, lambda, s2), std::invalid_argument);
    EXPECT_THROW(energy_identity_residual(t, l2, uf, 3000, 0.0, lambda, s2), std::invalid_argument);
}

TEST(EnergyIdentity, EnsembleResidualIsCentred)
{
    SimParams p = small();
    p.t_end = 3.0;
    EnsembleOptions o;
    o.observe_every = 10;
    o.threads = 1;
    const MomentSeries s = run_ensemble(p, 60, o);
    const Estimate r = energy_identity_residual(s, 1.0, 1.0);
    EXPECT_LT(std::abs(r.mean), 4.0 * r.se + 1e-4);
    EXPECT_THROW(energy_identity_residual(s, 5.0, 0.0), std::invalid_argument);

    // Without the step quadrature the sample-time trapezoid has an O(h^2) bias.
    MomentSeries coarse = s;
    coarse.quadrature.clear();
    EXPECT_NE(energy_identity_residual(coarse, 1.0, 1.0).mean, r.mean);
}

// ============================================================================
// Distances between measures
// ============================================================================

TEST(Distance, SelfZeroAndSymmetric)
{
    const EmpiricalMeasure a = kb_average(small(), 1.0, 0.1, replicas(3));
    KbOptions o = replicas(3);
    o.first_replica = 3;
    const EmpiricalMeasure b = kb_average(small(), 2.0, 0.1, o);
    EXPECT_NEAR(measure_distance(a, a).mean, 0.0, 1e-12);
    const auto scales = pooled_scales(a, b);
    EXPECT_EQ(scales.size(), 4u);
    const Estimate ab = measure_distance(a, b, scales);
    const Estimate ba = measure_distance(b, a, scales);
    EXPECT_NEAR(ab.mean, ba.mean, 1e-12);
    EXPECT_GT(ab.mean, 0.0);
    EXPECT_GT(ab.se, 0.0);
    EmpiricalMeasure empty = a;
    empty.snapshots.clear();
    EXPECT_THROW(measure_distance(a, empty), std::invalid_argument);
}

TEST(Distance, ObservablesOfSnapshot)
{
    const Grid g(40.0, 128);
    const Field u = soliton(g, 1.0, 0.0);
    const auto o = distance_observables(point_mass(u, 2).snapshots[0]);
    ASSERT_EQ(o.size(), 4u);
    EXPECT_NEAR(o[0], std::sqrt(l2_norm_sq(u)), 1e-12);
    EXPECT_NEAR(o[1], std::sqrt(h1_norm_sq(u)), 1e-12);
    EXPECT_NEAR(o[2], invariant_I(u), 1e-12);
    EXPECT_NEAR(o[3], cubic_integral(u), 1e-12);
}

// ============================================================================
// Feller probe
// ============================================================================

TEST(Feller, ZeroGapStaysZero)
{
    SimParams p = small();
    const Field u0 = soliton(p.grid(), 0.5, 0.0);
    FellerOptions o;
    o.threads = 1;
    const auto r = feller_probe(u0, u0, p, 1.0, 3, o);
    EXPECT_EQ(r.initial_gap, 0.0);
    EXPECT_EQ(r.final_median(), 0.0);
    EXPECT_EQ(r.final_median_gap(), 0.0);
}

TEST(Feller, DivergenceStartsAtTheGap)
{
    SimParams p = small();
    const Field u0 = soliton(p.grid(), 0.5, 0.0);
    const Field v0 = u0 + soliton(p.grid(), 0.5, 5.0) * 0.01;
    FellerOptions o;
    o.threads = 1;
    const auto r = feller_probe(u0, v0, p, 1.0, 3, o);
    EXPECT_NEAR(r.initial_gap, std::sqrt(h1_norm_sq(v0 - u0)), 1e-14);
    ASSERT_EQ(r.divergence.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(r.divergence[k][0], r.initial_gap, 1e-14);
        for (std::size_t i = 1; i < r.times.size(); ++i) {
            EXPECT_GE(r.divergence[k][i], r.divergence[k][i - 1]);
            EXPECT_GE(r.divergence[k][i], r.h1_gap[k][i]);
            EXPECT_LE(r.l2_gap[k][i], r.h1_gap[k][i] * (1 + 1e-12));
        }
    }
    EXPECT_GE(r.final_median(), r.final_median_gap());
}

// ============================================================================
// Persistence
// ============================================================================

TEST(MeasureIo, RoundTrip)
{
    KbOptions o = replicas(2);
    o.params_hash = 0x1234;
    const EmpiricalMeasure mu = kb_average(small(), 0.5, 0.1, o);
    const auto dir = std::filesystem::temp_directory_path() / "skdv_test_measure";
    std::filesystem::remove_all(dir);
    write_measure(dir, mu);
    const EmpiricalMeasure back = read_measure(dir);
    EXPECT_EQ(back.size(), mu.size());
    EXPECT_EQ(back.params_hash, 0x1234u);
    EXPECT_EQ(back.seed, mu.seed);
    EXPECT_EQ(back.stride, mu.stride);
    EXPECT_TRUE(back.grid == mu.grid);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        EXPECT_EQ(back.snapshots[i].coefficients, mu.snapshots[i].coefficients);
        EXPECT_EQ(back.snapshots[i].t, mu.snapshots[i].t);
        EXPECT_EQ(back.snapshots[i].replica, mu.snapshots[i].replica);
        EXPECT_EQ(back.snapshots[i].functionals.I, mu.snapshots[i].functionals.I);
    }
    EXPECT_THROW(read_measure(dir / "missing"), std::runtime_error);
}
