#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skdv/field.hpp"
#include "skdv/noise.hpp"
#include "skdv/rng.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

/// Parameters of the Fourier-diagonal noise profile.
struct NoiseSpec {
    double hs_norm = 0.1;  ///< target ||Phi||_HS(L2,L2)
    double decay = 4.0;    ///< |phi_k| ~ (1 + xi^2)^(-decay/2)
    std::size_t cutoff_mode = 0;

    NoiseOperator build(const Grid& grid) const;
};

/// One immutable record per experiment.
struct SimParams {
    double length = 100.0;
    std::size_t modes = 1024;
    double lambda = 0.1;
    ForcingSpec forcing{};
    NoiseSpec noise{};
    double dt = 1e-3;
    double t_end = 0.0;
    Dealias dealias = Dealias::on;
    /// Off turns the u u_x term off (linear and linear-stochastic studies).
    bool nonlinear = true;
    std::uint64_t seed = 1;
    std::size_t checkpoint_every = 0;
    double blowup_ceiling = 1e6;
    /// Bound on dt * max|xi| * max|u| for the explicit substep.
    double cfl_limit = 2.5;

    Grid grid() const { return Grid(length, modes); }
    /// Throws std::invalid_argument on the first out-of-range field.
    void validate() const;
    std::size_t step_count() const;
};

enum class TrajectoryStatus { ok, blow_up, cfl_violation, non_finite };

std::string to_string(TrajectoryStatus status);

struct TrajectoryState {
    double t = 0.0;
    std::uint64_t step = 0;
    Field u;
    RandomStream rng;
    TrajectoryStatus status = TrajectoryStatus::ok;
    std::string diagnosis;

    bool ok() const { return status == TrajectoryStatus::ok; }
};

/// State at t = 0 whose noise stream is (params.seed, stream_index).
TrajectoryState make_initial_state(const SimParams& params, const Field& u0, std::uint64_t stream_index);

/// Strang step with all per-run tables precomputed:
///   half exact linear flow, RK4 on u_t = -u u_x + f over dt, half exact
///   linear flow, then one exact stochastic-convolution increment.
/// Holds scratch buffers, so one Stepper per thread.
class Stepper {
public:
    explicit Stepper(const SimParams& params);
    Stepper(const SimParams& params, NoiseOperator noise);

    /// Advances one step in place. On instability the state keeps the
    /// offending step's time and a non-ok status; further calls are no-ops.
    void step(TrajectoryState& state);

    const SimParams& params() const { return params_; }
    const Grid& grid() const { return grid_; }
    const Field& forcing() const { return forcing_; }
    const NoiseOperator& noise() const { return noise_; }

private:
    void rhs(std::span<const Complex> c, std::span<Complex> out, double* sup_u);
    void check(TrajectoryState& state, std::span<const Complex> c, double sup_u);

    SimParams params_;
    Grid grid_;
    Field forcing_;
    NoiseOperator noise_;
    bool has_forcing_;
    bool has_noise_;
    bool has_rhs_;
    std::vector<Complex> half_flow_;
    std::vector<Complex> forcing_hat_;
    std::vector<Complex> ou_scale_;
    NonlinearEvaluator nonlinear_;
    std::vector<Complex> c_, k1_, k2_, k3_, k4_, tmp_;
};

/// Functional version of one step; the input state is left untouched.
TrajectoryState step(const TrajectoryState& state, const SimParams& params);

/// Observers map a state to a row of numbers and must be reentrant.
using Observer = std::function<std::vector<double>(const TrajectoryState&)>;

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::uint64_t> steps;
    /// outputs[observer][sample] is that observer's row at times[sample].
    std::vector<std::vector<std::vector<double>>> outputs;
    TrajectoryState final_state;
    TrajectoryStatus status = TrajectoryStatus::ok;
    double failure_time = 0.0;
};

struct IntegrateOptions {
    std::size_t observe_every = 1;
    /// Called with the state after every checkpoint_every-th step when > 0.
    std::function<void(const TrajectoryState&)> on_checkpoint;
    /// Called after every successful step, before that step's observation.
    std::function<void(const TrajectoryState&)> on_step;
};

/// Runs from `initial` until step index params.step_count(), invoking the
/// observers at the initial state and after every observe_every-th step.
TrajectoryRecord integrate(const SimParams& params, TrajectoryState initial, const std::vector<Observer>& observers,
                           const IntegrateOptions& options = {});
TrajectoryRecord integrate(Stepper& stepper, TrajectoryState initial, const std::vector<Observer>& observers,
                           const IntegrateOptions& options = {});

}  // namespace skdv
