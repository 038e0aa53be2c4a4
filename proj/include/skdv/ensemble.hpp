#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skdv/functionals.hpp"
#include "skdv/integrator.hpp"
#include "skdv/statistics.hpp"

namespace skdv {

/// Scalar path functionals whose ensemble means a MomentSeries reports.
enum class Moment {
    l2_sq,      ///< ||u||^2
    l2_4,       ///< ||u||^4
    l2_6,       ///< ||u||^6
    l2_10_3,    ///< ||u||^(10/3)
    dx_l2_sq,   ///< ||u_x||^2
    dx_l2_4,    ///< ||u_x||^4
    h1_sq,      ///< ||u||^2_H1
    I,
    I_sq,
    uf,         ///< (u, f)
    cubic,
    alpha,
    sup_h1_sq,  ///< sup_{s <= t} ||u_s||^2_H1
};

std::string to_string(Moment m);
const std::vector<Moment>& all_moments();

/// Thrown when an ensemble loses more trajectories than it tolerates.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, std::size_t trajectory, double time, TrajectoryStatus status)
        : std::runtime_error(what), trajectory_(trajectory), time_(time), status_(status)
    {
    }
    std::size_t trajectory() const { return trajectory_; }
    double time() const { return time_; }
    TrajectoryStatus status() const { return status_; }

private:
    std::size_t trajectory_;
    double time_;
    TrajectoryStatus status_;
};

struct EnsembleOptions {
    std::size_t observe_every = 10;
    unsigned threads = 0;
    /// u0 for trajectory i; zero field when empty.
    std::function<Field(std::size_t)> initial;
    /// Trajectory i draws noise from stream first_stream + i.
    std::uint64_t first_stream = 0;
    double max_abort_fraction = 0.01;
};

/// Step-resolution time integrals of one path over [times[i], times[i+1]],
/// by the trapezoidal rule on the integrator's own steps.
struct IntervalQuadrature {
    double l2_sq = 0.0;          ///< int ||u||^2 ds
    double uf = 0.0;             ///< int (u, f) ds
    double uf_discounted = 0.0;  ///< int e^{-2 lambda (times[i+1] - s)} (u, f) ds
};

/// Ensemble statistics over time. Keeps every trajectory's sampled path so
/// that any pathwise quantity gets an honest standard error.
struct MomentSeries {
    std::vector<double> times;
    /// paths[j][i]: functionals of surviving trajectory j at times[i].
    std::vector<std::vector<FunctionalSample>> paths;
    /// Stream index of each surviving trajectory.
    std::vector<std::uint64_t> streams;
    /// quadrature[j][i] covers [times[i], times[i+1]] of path j. Empty for
    /// hand-built series, which fall back to the trapezoid on sample times.
    std::vector<std::vector<IntervalQuadrature>> quadrature;
    std::size_t aborted = 0;

    double lambda = 0.0;
    double dt = 0.0;
    double phi_hs_sq = 0.0;  ///< ||Phi||^2_HS(L2,L2)
    double f_l2_sq = 0.0;    ///< ||f||^2_L2

    std::size_t size() const { return paths.size(); }
    double value(Moment m, std::size_t trajectory, std::size_t time_index) const;
    /// Mean and standard error across trajectories at one sample time.
    Estimate at(Moment m, std::size_t time_index) const;
    std::vector<Estimate> track(Moment m) const;
    /// Mean and SE over trajectories of fn(path, time_index), per time.
    std::vector<Estimate> pathwise(const std::function<double(const std::vector<FunctionalSample>&, std::size_t)>& fn) const;
};

/// Runs M independent trajectories of params (each to params.t_end) and
/// collects their functionals every observe_every steps. Result does not
/// depend on scheduling. Throws InstabilityError when more than
/// max_abort_fraction of the trajectories abort; survivors are kept otherwise.
MomentSeries run_ensemble(const SimParams& params, std::size_t trajectories, const EnsembleOptions& options = {});

/// Outcome of one inequality check.
struct CheckReport {
    std::string name;
    bool passed = false;
    /// Smallest (allowed - observed) over the checked points; >= 0 iff passed.
    double worst_margin = 0.0;
    std::string detail;
};

/// Pathwise energy balance residual per sample time:
///   ||u_t||^2 + 2 lambda int_0^t ||u||^2 - ||u_0||^2 - t ||Phi||^2_HS - 2 int_0^t (u, f),
/// time integrals from the step quadrature when present.
std::vector<Estimate> energy_balance_residual(const MomentSeries& series);

/// Upper envelope of E||u_t||^2 obtained by integrating
///   d/dt E||u||^2 + lambda E||u||^2 <= ||Phi||^2 + ||f||^2 / lambda.
double energy_envelope(double t, double initial_l2_sq, double lambda, double phi_hs_sq, double f_l2_sq);

/// Two-window no-growth test: the maximum of the track over the second half
/// of the horizon may exceed the first-half maximum by at most `se_factor`
/// standard errors.
CheckReport no_growth_check(const MomentSeries& series, Moment m, double se_factor = 3.0);

/// k = 1: E||u_t||^2 <= energy_envelope + 3 SE at every sample time.
/// k >= 2: no-growth test on E||u||^(2k) (k <= 3).
CheckReport moment_bound_check(const MomentSeries& series, int k);

/// No-growth on E||u_x||^2, E||u_x||^4 and E[I^2], plus
/// (2/3)E||u_x||^2 - C E||u||^(10/3) - 3SE <= E[I] <= (4/3)E||u_x||^2 + C E||u||^(10/3) + 3SE.
CheckReport h1_bound_check(const MomentSeries& series, double sandwich_constant);

struct FiniteTimeSupReport {
    std::vector<double> radii;          ///< ||u0||_H1 values probed
    std::vector<Estimate> sup_h1_sq;    ///< E[sup_{t <= T} ||u_t||^2_H1] per radius
    bool finite = false;
    bool monotone = false;
    bool passed() const { return finite && monotone; }
};

/// Probes u0 = profile scaled to ||u0||_H1 in {0, R0/2, R0} over [0, T].
/// Monotone means each estimate is at least the previous one minus 3 SE.
FiniteTimeSupReport finite_time_sup_check(const SimParams& params, std::size_t trajectories, double horizon,
                                          double radius, const Field& profile, const EnsembleOptions& options = {});

}  // namespace skdv
