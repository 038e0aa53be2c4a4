#include "skdv/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace skdv {

NoiseOperator NoiseSpec::build(const Grid& grid) const
{
    if (hs_norm == 0.0) {
        return NoiseOperator(grid);
    }
    return NoiseOperator::with_hs_norm(grid, hs_norm, decay, cutoff_mode);
}

void SimParams::validate() const
{
    const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
    if (!(length > 0.0) || !std::isfinite(length)) fail("length must be positive");
    if (modes < 8 || modes % 2 != 0) fail("modes must be even and >= 8");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be nonnegative");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be nonnegative");
    if (!(noise.hs_norm >= 0.0)) fail("noise hs norm must be nonnegative");
    if (!(blowup_ceiling > 0.0)) fail("blow-up ceiling must be positive");
    if (!(cfl_limit > 0.0)) fail("cfl limit must be positive");
    const double steps = t_end / dt;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
        fail("t_end must be an integer multiple of dt");
    }
    // Builders validate their own parameters.
    const Grid g = grid();
    (void)noise.build(g);
    (void)build_forcing(forcing, g);
}

std::size_t SimParams::step_count() const
{
    return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::string to_string(TrajectoryStatus status)
{
    switch (status) {
    case TrajectoryStatus::ok: return "ok";
    case TrajectoryStatus::blow_up: return "instability:blow-up";
    case TrajectoryStatus::cfl_violation: return "instability:cfl";
    case TrajectoryStatus::non_finite: return "instability:non-finite";
    }
    return "unknown";
}

TrajectoryState make_initial_state(const SimParams& params, const Field& u0, std::uint64_t stream_index)
{
    require_same_grid(params.grid(), u0.grid());
    return TrajectoryState{0.0, 0, u0.to_spectral(), RandomStream(params.seed, stream_index),
                           TrajectoryStatus::ok, {}};
}

Stepper::Stepper(const SimParams& params) : Stepper(params, params.noise.build(params.grid()))
{
}

Stepper::Stepper(const SimParams& params, NoiseOperator noise)
    : params_(params),
      grid_(params.grid()),
      forcing_(build_forcing(params.forcing, grid_)),
      noise_(std::move(noise)),
      nonlinear_(grid_, params.dealias)
{
    params_.validate();
    require_same_grid(grid_, noise_.grid());
    const std::size_t n = grid_.spectral_size();
    forcing_hat_ = forcing_.coefficients();
    has_forcing_ = false;
    for (const auto& z : forcing_hat_) {
        has_forcing_ = has_forcing_ || z != Complex{};
    }
    has_noise_ = !noise_.is_zero();
    has_rhs_ = params_.nonlinear || has_forcing_;

    half_flow_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        half_flow_[k] = semigroup_multiplier(grid_, k, 0.5 * params_.dt, params_.lambda);
    }
    const double sd = std::sqrt(convolution_variance_factor(params_.dt, params_.lambda));
    ou_scale_.assign(noise_.amplitudes().begin(), noise_.amplitudes().end());
    for (auto& s : ou_scale_) {
        s *= sd;
    }
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
}

void Stepper::rhs(std::span<const Complex> c, std::span<Complex> out, double* sup_u)
{
    if (params_.nonlinear) {
        const double sup = nonlinear_.evaluate(c, out);
        if (sup_u != nullptr) {
            *sup_u = sup;
        }
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = forcing_hat_[k] - out[k];
        }
    } else {
        std::copy(forcing_hat_.begin(), forcing_hat_.end(), out.begin());
    }
}

void Stepper::step(TrajectoryState& state)
{
    if (!state.ok()) {
        return;
    }
    c_ = std::move(state.u).release_coefficients();
    const std::size_t n = c_.size();
    const double dt = params_.dt;

    for (std::size_t k = 0; k < n; ++k) {
        c_[k] *= half_flow_[k];
    }

    double sup_u = -1.0;
    if (has_rhs_) {
        rhs(c_, k1_, &sup_u);
        for (std::size_t k = 0; k < n; ++k) tmp_[k] = c_[k] + 0.5 * dt * k1_[k];
        rhs(tmp_, k2_, nullptr);
        for (std::size_t k = 0; k < n; ++k) tmp_[k] = c_[k] + 0.5 * dt * k2_[k];
        rhs(tmp_, k3_, nullptr);
        for (std::size_t k = 0; k < n; ++k) tmp_[k] = c_[k] + dt * k3_[k];
        rhs(tmp_, k4_, nullptr);
        for (std::size_t k = 0; k < n; ++k) {
            c_[k] += dt / 6.0 * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        c_[k] *= half_flow_[k];
    }
    if (has_noise_) {
        add_gaussian_modes(c_, ou_scale_, state.rng);
    }
    c_.front().imag(0.0);
    c_.back().imag(0.0);

    state.step += 1;
    state.t = static_cast<double>(state.step) * dt;
    check(state, c_, sup_u);
    state.u = Field::from_spectral(grid_, std::move(c_));
}

void Stepper::check(TrajectoryState& state, std::span<const Complex> c, double sup_u)
{
    const double h1_sq = spectral_l2_sq(grid_, c) + spectral_weighted_sq(grid_, c, 1);
    std::ostringstream why;
    if (!std::isfinite(h1_sq)) {
        state.status = TrajectoryStatus::non_finite;
        why << "non-finite state at t=" << state.t;
    } else if (std::sqrt(h1_sq) > params_.blowup_ceiling || sup_u > params_.blowup_ceiling) {
        state.status = TrajectoryStatus::blow_up;
        why << "||u||_H1=" << std::sqrt(h1_sq) << " max|u|=" << sup_u << " exceed ceiling "
            << params_.blowup_ceiling << " at t=" << state.t;
    } else if (sup_u >= 0.0) {
        const std::size_t top = params_.dealias == Dealias::on ? grid_.dealias_cutoff() : grid_.nyquist();
        const double courant = params_.dt * grid_.half_wavenumbers()[top] * sup_u;
        if (courant > params_.cfl_limit) {
            state.status = TrajectoryStatus::cfl_violation;
            why << "dt*max|xi|*max|u|=" << courant << " exceeds " << params_.cfl_limit << " at t=" << state.t;
        }
    }
    if (!state.ok()) {
        state.diagnosis = why.str();
    }
}

TrajectoryState step(const TrajectoryState& state, const SimParams& params)
{
    Stepper stepper(params);
    TrajectoryState next = state;
    stepper.step(next);
    return next;
}

TrajectoryRecord integrate(const SimParams& params, TrajectoryState initial, const std::vector<Observer>& observers,
                           const IntegrateOptions& options)
{
    Stepper stepper(params);
    return integrate(stepper, std::move(initial), observers, options);
}

TrajectoryRecord integrate(Stepper& stepper, TrajectoryState initial, const std::vector<Observer>& observers,
                           const IntegrateOptions& options)
{
    if (options.observe_every == 0) {
        throw std::invalid_argument("observe_every must be positive");
    }
    const std::size_t total = stepper.params().step_count();
    const std::size_t checkpoint_every = stepper.params().checkpoint_every;
    TrajectoryRecord rec{{}, {}, std::vector<std::vector<std::vector<double>>>(observers.size()), std::move(initial),
                         TrajectoryStatus::ok, 0.0};
    TrajectoryState& state = rec.final_state;
    const auto observe = [&] {
        rec.times.push_back(state.t);
        rec.steps.push_back(state.step);
        for (std::size_t i = 0; i < observers.size(); ++i) {
            rec.outputs[i].push_back(observers[i](state));
        }
    };
    if (state.step % options.observe_every == 0 || state.step == 0) {
        observe();
    }
    while (state.step < total) {
        stepper.step(state);
        if (!state.ok()) {
            rec.status = state.status;
            rec.failure_time = state.t;
            return rec;
        }
        if (options.on_step) {
            options.on_step(state);
        }
        if (state.step % options.observe_every == 0) {
            observe();
        }
        if (checkpoint_every > 0 && options.on_checkpoint && state.step % checkpoint_every == 0) {
            options.on_checkpoint(state);
        }
    }
    return rec;
}

}  // namespace skdv
