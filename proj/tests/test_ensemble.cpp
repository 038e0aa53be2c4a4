#include <gtest/gtest.h>

#include <cmath>

#include "skdv/ensemble.hpp"
#include "skdv/random_fields.hpp"

using namespace skdv;

namespace {

SimParams small(double t_end = 2.0)
{
    SimParams p;
    p.length = 50.0;
    p.modes = 64;
    p.lambda = 0.5;
    p.forcing = {ForcingShape::gaussian_bump, 1.0, 5.0};
    p.noise.hs_norm = 0.5;
    p.dt = 0.01;
    p.t_end = t_end;
    p.seed = 21;
    return p;
}

EnsembleOptions every(std::size_t n, unsigned threads = 1)
{
    EnsembleOptions o;
    o.observe_every = n;
    o.threads = threads;
    return o;
}

/// Series whose l2_sq mean follows `level(t)` with a fixed spread.
MomentSeries synthetic(const std::function<double(double)>& level, std::size_t m = 50, std::size_t n = 41)
{
    MomentSeries s;
    s.lambda = 1.0;
    for (std::size_t i = 0; i < n; ++i) s.times.push_back(0.25 * static_cast<double>(i));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<FunctionalSample> path(n);
        const double wiggle = (j % 2 == 0 ? 1.0 : -1.0) * 0.01;
        for (std::size_t i = 0; i < n; ++i) {
            path[i].t = s.times[i];
            path[i].l2_sq = level(s.times[i]) + wiggle;
            path[i].dx_l2_sq = path[i].l2_sq;
            path[i].h1_sq = 2.0 * path[i].l2_sq;
        }
        s.paths.push_back(std::move(path));
        s.streams.push_back(j);
    }
    return s;
}

}  // namespace

// ============================================================================
// Ensemble runner
// ============================================================================

TEST(Ensemble, WithoutNoiseEveryPathAgrees)
{
    SimParams p = small();
    p.noise.hs_norm = 0.0;
    const MomentSeries s = run_ensemble(p, 4, every(20));
    ASSERT_EQ(s.size(), 4u);
    ASSERT_EQ(s.times.size(), 11u);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        EXPECT_EQ(s.at(Moment::l2_sq, i).se, 0.0);
        EXPECT_EQ(s.paths[0][i].l2_sq, s.paths[3][i].l2_sq);
    }
}

TEST(Ensemble, PrefixAndThreadInvariance)
{
    const SimParams p = small(1.0);
    const MomentSeries a = run_ensemble(p, 6, every(10, 1));
    const MomentSeries b = run_ensemble(p, 3, every(10, 1));
    const MomentSeries c = run_ensemble(p, 6, every(10, 3));
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < a.times.size(); ++i) EXPECT_EQ(a.paths[j][i].l2_sq, b.paths[j][i].l2_sq);
    }
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t i = 0; i < a.times.size(); ++i) {
            EXPECT_EQ(a.paths[j][i].l2_sq, c.paths[j][i].l2_sq);
            EXPECT_EQ(a.paths[j][i].alpha, c.paths[j][i].alpha);
        }
    }
    EXPECT_EQ(a.streams, c.streams);
    EXPECT_EQ(a.quadrature.size(), 6u);
    EXPECT_EQ(a.quadrature[0].size(), a.times.size() - 1);
}

TEST(Ensemble, RejectsTinyEnsembles)
{
    EXPECT_THROW(run_ensemble(small(), 1), std::invalid_argument);
}

TEST(Ensemble, MomentsObeyJensen)
{
    const MomentSeries s = run_ensemble(small(1.0), 20, every(25));
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double m1 = s.at(Moment::l2_sq, i).mean;
        EXPECT_GE(s.at(Moment::l2_4, i).mean, m1 * m1 * (1 - 1e-12));
        EXPECT_GE(s.at(Moment::l2_6, i).mean, std::pow(m1, 3) * (1 - 1e-12));
        EXPECT_GE(s.at(Moment::sup_h1_sq, i).mean, s.at(Moment::h1_sq, i).mean);
        EXPECT_NEAR(s.at(Moment::h1_sq, i).mean, m1 + s.at(Moment::dx_l2_sq, i).mean, 1e-10 * (1 + m1));
    }
}

TEST(Ensemble, StandardErrorShrinksAsRootM)
{
    SimParams p = small(0.5);
    p.forcing = {};
    const MomentSeries a = run_ensemble(p, 50, every(50));
    const MomentSeries b = run_ensemble(p, 200, every(50));
    const double ratio = a.at(Moment::l2_sq, 1).se / b.at(Moment::l2_sq, 1).se;
    EXPECT_NEAR(ratio, 2.0, 0.6);
}

TEST(Ensemble, AbortAccounting)
{
    SimParams p = small(0.5);
    p.forcing = {};
    p.blowup_ceiling = 1.5;
    EnsembleOptions o = every(10);
    o.initial = [&](std::size_t j) { return j == 0 ? soliton(p.grid(), 1.0, 0.0) : Field(p.grid()); };
    EXPECT_THROW(run_ensemble(p, 50, o), InstabilityError);
    o.max_abort_fraction = 0.05;
    const MomentSeries s = run_ensemble(p, 50, o);
    EXPECT_EQ(s.aborted, 1u);
    EXPECT_EQ(s.size(), 49u);
    EXPECT_EQ(s.streams.front(), 1u);
    try {
        o.max_abort_fraction = 0.0;
        (void)run_ensemble(p, 50, o);
        FAIL() << "expected an instability";
    } catch (const InstabilityError& e) {
        EXPECT_EQ(e.trajectory(), 0u);
        EXPECT_EQ(e.status(), TrajectoryStatus::blow_up);
    }
}

// ============================================================================
// Energy balance
// ============================================================================

TEST(EnergyBalance, DeterministicResidualIsQuadratureSmall)
{
    SimParams p = small(2.0);
    p.noise.hs_norm = 0.0;
    EnsembleOptions o = every(10);
    o.initial = [&](std::size_t) { return soliton(p.grid(), 0.5, 0.0); };
    const MomentSeries s = run_ensemble(p, 2, o);
    const auto r = energy_balance_residual(s);
    const double scale = s.paths[0][0].l2_sq;
    for (const auto& e : r) EXPECT_LT(std::abs(e.mean), 1e-5 * scale);
    EXPECT_EQ(r.front().mean, 0.0);
}

TEST(EnergyBalance, StochasticResidualIsCentred)
{
    const MomentSeries s = run_ensemble(small(2.0), 100, every(20));
    const auto r = energy_balance_residual(s);
    for (std::size_t i = 1; i < r.size(); ++i) {
        EXPECT_LT(std::abs(r[i].mean), 4.0 * r[i].se + 1e-3) << "t=" << s.times[i];
    }
}

TEST(EnergyBalance, EnvelopeLimits)
{
    EXPECT_DOUBLE_EQ(energy_envelope(0.0, 3.0, 0.5, 0.1, 2.0), 3.0);
    EXPECT_NEAR(energy_envelope(1e3, 3.0, 0.5, 0.1, 2.0), (0.1 + 2.0 / 0.5) / 0.5, 1e-12);
    EXPECT_THROW(energy_envelope(1.0, 0.0, 0.0, 0.1, 0.0), std::invalid_argument);
}

// ============================================================================
// Inequality checks on synthetic tracks
// ============================================================================

TEST(NoGrowth, FlatPassesRisingFails)
{
    const auto flat = synthetic([](double) { return 5.0; });
    EXPECT_TRUE(no_growth_check(flat, Moment::l2_sq).passed);
    const auto saturating = synthetic([](double t) { return 5.0 * (1.0 - std::exp(-3.0 * t)); });
    EXPECT_TRUE(no_growth_check(saturating, Moment::l2_sq).passed);
    const auto rising = synthetic([](double t) { return 1.0 + t; });
    const CheckReport r = no_growth_check(rising, Moment::l2_sq);
    EXPECT_FALSE(r.passed);
    EXPECT_LT(r.worst_margin, 0.0);
    const auto too_short = synthetic([](double) { return 1.0; }, 5, 1);
    EXPECT_FALSE(no_growth_check(too_short, Moment::l2_sq).passed);
}

TEST(MomentBound, EnvelopeCheck)
{
    auto s = synthetic([](double t) { return 2.0 * (1.0 - std::exp(-t)); });
    s.phi_hs_sq = 1.0;
    s.f_l2_sq = 1.0;
    EXPECT_TRUE(moment_bound_check(s, 1).passed);
    s.f_l2_sq = 0.0;
    s.phi_hs_sq = 0.5;
    EXPECT_FALSE(moment_bound_check(s, 1).passed);
    EXPECT_THROW(moment_bound_check(s, 0), std::invalid_argument);
    EXPECT_THROW(moment_bound_check(s, 4), std::invalid_argument);
}

// ============================================================================
// Finite-time supremum
// ============================================================================

TEST(FiniteTimeSup, ZeroDataWithoutForcing)
{
    SimParams p = small(0.5);
    p.forcing = {};
    p.noise.hs_norm = 0.0;
    const Field profile = soliton(p.grid(), 0.5, 0.0);
    const auto r = finite_time_sup_check(p, 2, 0.5, 1.0, profile, every(10));
    ASSERT_EQ(r.radii.size(), 3u);
    EXPECT_EQ(r.sup_h1_sq[0].mean, 0.0);
    EXPECT_NEAR(r.sup_h1_sq[2].mean, 1.0, 1e-9);  // damping: sup is at t = 0
    EXPECT_TRUE(r.passed());
}

TEST(FiniteTimeSup, StochasticIsFiniteAndMonotone)
{
    const SimParams p = small(1.0);
    const Field profile = soliton(p.grid(), 0.5, 0.0);
    const auto r = finite_time_sup_check(p, 10, 1.0, 3.0, profile, every(10));
    EXPECT_TRUE(r.finite);
    EXPECT_TRUE(r.monotone);
    EXPECT_GE(r.sup_h1_sq[2].mean, 9.0);
}
