#include <gtest/gtest.h>

#include <cmath>

#include "skdv/functionals.hpp"
#include "skdv/integrator.hpp"
#include "skdv/random_fields.hpp"
#include "skdv/spectral.hpp"

using namespace skdv;

namespace {

SimParams deterministic(std::size_t modes, double dt, double t_end)
{
    SimParams p;
    p.length = 100.0;
    p.modes = modes;
    p.lambda = 0.0;
    p.noise.hs_norm = 0.0;
    p.dt = dt;
    p.t_end = t_end;
    return p;
}

SimParams stochastic()
{
    SimParams p;
    p.length = 100.0;
    p.modes = 128;
    p.lambda = 0.5;
    p.forcing = {ForcingShape::gaussian_bump, 1.0, 5.0};
    p.noise.hs_norm = 0.1;
    p.dt = 0.01;
    p.t_end = 2.0;
    return p;
}

}  // namespace

// ============================================================================
// Parameters
// ============================================================================

TEST(SimParams, Validation)
{
    SimParams p = deterministic(64, 0.01, 1.0);
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.step_count(), 100u);
    auto bad = p;
    bad.dt = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.t_end = 1.005;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.lambda = -1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.modes = 10;
    EXPECT_NO_THROW(bad.validate());
    bad.modes = 7;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.noise.decay = 2.0;
    bad.noise.hs_norm = 0.1;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

// ============================================================================
// Deterministic accuracy
// ============================================================================

TEST(Integrator, SolitonTranslatesAndConserves)
{
    const SimParams p = deterministic(256, 5e-3, 2.0);
    const Grid g = p.grid();
    const Field u0 = soliton(g, 1.0, -10.0);
    const TrajectoryRecord rec = integrate(p, make_initial_state(p, u0, 0), {});
    ASSERT_EQ(rec.status, TrajectoryStatus::ok);
    const Field& u = rec.final_state.u;
    const Field exact = soliton(g, 1.0, -8.0);
    EXPECT_LT(std::sqrt(l2_norm_sq(u - exact) / l2_norm_sq(exact)), 1e-4);
    EXPECT_LT(std::abs(l2_norm_sq(u) / l2_norm_sq(u0) - 1.0), 1e-9);
    EXPECT_LT(std::abs(invariant_I(u) / invariant_I(u0) - 1.0), 1e-7);
    EXPECT_DOUBLE_EQ(rec.final_state.t, 2.0);
}

TEST(Integrator, StrangIsSecondOrder)
{
    const Grid g(100.0, 256);
    const Field u0 = soliton(g, 1.0, 0.0);
    const Field exact = soliton(g, 1.0, 1.0);
    std::vector<double> err;
    for (double dt : {0.01, 0.005}) {
        const SimParams p = deterministic(256, dt, 1.0);
        const auto rec = integrate(p, make_initial_state(p, u0, 0), {});
        err.push_back(std::sqrt(l2_norm_sq(rec.final_state.u - exact) / l2_norm_sq(exact)));
    }
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
}

TEST(Integrator, LinearFlowIsExact)
{
    SimParams p = deterministic(128, 0.01, 5.0);
    p.lambda = 0.2;
    p.nonlinear = false;
    RandomStream rng(1, 0);
    const Field u0 = random_band_limited(p.grid(), 40, 1.0, rng, false);
    const auto rec = integrate(p, make_initial_state(p, u0, 0), {});
    const Field exact = apply_linear_semigroup(u0, 5.0, 0.2);
    EXPECT_LT(std::sqrt(l2_norm_sq(rec.final_state.u - exact) / l2_norm_sq(exact)), 1e-12);
}

TEST(Integrator, ZeroStaysZeroWithoutForcingOrNoise)
{
    SimParams p = deterministic(64, 0.01, 1.0);
    p.lambda = 0.3;
    const auto rec = integrate(p, make_initial_state(p, Field(p.grid()), 0), {});
    EXPECT_EQ(l2_norm_sq(rec.final_state.u), 0.0);
}

TEST(Integrator, MeanFollowsItsOdeToSecondOrder)
{
    // The mean obeys m' = -lambda m + mean(f); splitting errors shrink as dt^2.
    std::vector<double> err;
    for (double dt : {0.02, 0.01}) {
        SimParams p = deterministic(64, dt, 2.0);
        p.lambda = 0.5;
        p.forcing = {ForcingShape::gaussian_bump, 1.0, 5.0};
        const double mf = mean_value(build_forcing(p.forcing, p.grid()));
        const auto rec = integrate(p, make_initial_state(p, Field(p.grid()), 0), {});
        const double exact = mf * (-std::expm1(-0.5 * 2.0)) / 0.5;
        err.push_back(std::abs(mean_value(rec.final_state.u) - exact) / exact);
    }
    EXPECT_LT(err[1], 5e-6);
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.5);
}

// ============================================================================
// Stochastic reproducibility
// ============================================================================

TEST(Integrator, SameStreamSamePath)
{
    const SimParams p = stochastic();
    const Field u0(p.grid());
    const auto a = integrate(p, make_initial_state(p, u0, 3), {});
    const auto b = integrate(p, make_initial_state(p, u0, 3), {});
    const auto c = integrate(p, make_initial_state(p, u0, 4), {});
    EXPECT_EQ(a.final_state.u.coefficients(), b.final_state.u.coefficients());
    EXPECT_EQ(a.final_state.rng, b.final_state.rng);
    EXPECT_NE(a.final_state.u.coefficients(), c.final_state.u.coefficients());
}

TEST(Integrator, FunctionalStepMatchesStepper)
{
    const SimParams p = stochastic();
    TrajectoryState s = make_initial_state(p, Field(p.grid()), 1);
    Stepper stepper(p);
    TrajectoryState t = s;
    for (int i = 0; i < 5; ++i) {
        s = step(s, p);
        stepper.step(t);
    }
    EXPECT_EQ(s.u.coefficients(), t.u.coefficients());
    EXPECT_EQ(s.step, 5u);
}

TEST(Integrator, ObservationSchedule)
{
    SimParams p = stochastic();
    p.t_end = 1.0;
    std::vector<double> seen;
    const std::vector<Observer> obs{[&](const TrajectoryState& s) {
        seen.push_back(s.t);
        return std::vector<double>{s.t, l2_norm_sq(s.u)};
    }};
    IntegrateOptions o;
    o.observe_every = 25;
    const auto rec = integrate(p, make_initial_state(p, Field(p.grid()), 0), obs, o);
    ASSERT_EQ(rec.times.size(), 5u);
    EXPECT_EQ(rec.times, seen);
    EXPECT_EQ(rec.steps.back(), 100u);
    EXPECT_EQ(rec.outputs[0][4][0], 1.0);
    o.observe_every = 0;
    EXPECT_THROW(integrate(p, make_initial_state(p, Field(p.grid()), 0), obs, o), std::invalid_argument);
}

TEST(Integrator, CheckpointCallback)
{
    SimParams p = stochastic();
    p.checkpoint_every = 40;
    std::vector<std::uint64_t> steps;
    IntegrateOptions o;
    o.on_checkpoint = [&](const TrajectoryState& s) { steps.push_back(s.step); };
    (void)integrate(p, make_initial_state(p, Field(p.grid()), 0), {}, o);
    EXPECT_EQ(steps, (std::vector<std::uint64_t>{40, 80, 120, 160, 200}));
}

// ============================================================================
// Instability detection
// ============================================================================

TEST(Integrator, ReportsCflViolation)
{
    SimParams p = deterministic(256, 0.5, 5.0);
    const Field u0 = soliton(p.grid(), 4.0, 0.0);
    const auto rec = integrate(p, make_initial_state(p, u0, 0), {});
    EXPECT_EQ(rec.status, TrajectoryStatus::cfl_violation);
    EXPECT_EQ(to_string(rec.status).rfind("instability:", 0), 0u);
    EXPECT_GT(rec.failure_time, 0.0);
    EXPECT_FALSE(rec.final_state.diagnosis.empty());
}

TEST(Integrator, ReportsBlowUp)
{
    SimParams p = deterministic(64, 0.01, 1.0);
    p.blowup_ceiling = 10.0;
    const Field u0 = soliton(p.grid(), 1.0, 0.0) * 5.0;
    const auto rec = integrate(p, make_initial_state(p, u0, 0), {});
    EXPECT_EQ(rec.status, TrajectoryStatus::blow_up);
    EXPECT_EQ(rec.final_state.step, 1u);
}

TEST(Integrator, FailedStateStaysPut)
{
    SimParams p = deterministic(64, 0.01, 1.0);
    p.blowup_ceiling = 10.0;
    Stepper s(p);
    TrajectoryState st = make_initial_state(p, soliton(p.grid(), 1.0, 0.0) * 5.0, 0);
    s.step(st);
    ASSERT_FALSE(st.ok());
    const auto before = st.step;
    s.step(st);
    EXPECT_EQ(st.step, before);
}
