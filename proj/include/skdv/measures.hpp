#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "skdv/ensemble.hpp"
#include "skdv/functionals.hpp"
#include "skdv/integrator.hpp"
#include "skdv/statistics.hpp"

namespace skdv {

struct Snapshot {
    double t = 0.0;
    std::uint64_t replica = 0;
    FunctionalSample functionals;
    /// Half-spectrum coefficients; empty when the measure keeps summaries only.
    std::vector<Complex> coefficients;
};

/// Uniform-weight cloud of states sampled along replicas started at u0 = 0.
/// Snapshots of one replica are contiguous and in time order.
struct EmpiricalMeasure {
    Grid grid{1.0, 8};
    double horizon = 0.0;
    double stride = 0.0;
    double burn_in = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t params_hash = 0;
    std::vector<Snapshot> snapshots;

    std::size_t size() const { return snapshots.size(); }
    bool has_coefficients() const;
    /// Distinct replica ids in order of first appearance.
    std::vector<std::uint64_t> replicas() const;
    /// Snapshots with t <= horizon; the result reports that horizon.
    EmpiricalMeasure truncated(double horizon) const;
    /// Throws std::invalid_argument unless the invariants hold.
    void validate() const;
};

struct KbOptions {
    std::size_t replicas = 10;
    /// Snapshots are taken only at t >= burn_in.
    double burn_in = 0.0;
    bool keep_coefficients = true;
    unsigned threads = 0;
    /// Replica r draws noise from stream first_replica + r.
    std::uint64_t first_replica = 0;
    std::uint64_t params_hash = 0;
};

/// mu_n: snapshots at t = stride, 2 stride, ... <= horizon of replicas
/// started from zero. stride must be a positive multiple of params.dt no
/// larger than the horizon. Any unstable replica raises InstabilityError.
EmpiricalMeasure kb_average(const SimParams& params, double horizon, double stride, const KbOptions& options = {});

/// mu-average of sum_{|k| >= N} |c_k|^2. SE from replica means.
Estimate tail_mass(const EmpiricalMeasure& mu, std::size_t cutoff);

/// Residual of the discounted energy identity for one path over the window
/// [times[first], times[first] + window]:
///   ||z_T||^2 - e^{-2 lambda T} ||z_0||^2 - int_0^T e^{-2 lambda (T-s)} 2 (z_s, f) ds
///   - ||Phi||^2_HS (1 - e^{-2 lambda T}) / (2 lambda),
/// with the (z, f) integral by the trapezoidal rule.
double energy_identity_residual(std::span<const double> times, std::span<const double> l2_sq,
                                std::span<const double> uf, std::size_t first, double window, double lambda,
                                double phi_hs_sq);

/// The same residual averaged per trajectory over every window start with
/// times >= from, then over trajectories. The forcing integral comes from the
/// step quadrature when the series carries one.
Estimate energy_identity_residual(const MomentSeries& series, double window, double from);

/// Mean over replicas and over stationary-segment times t >= from of
/// ||u_{t+d} - u_t||^2, needing coefficients and d a multiple of the stride.
Estimate increment_moment(const EmpiricalMeasure& mu, double lag, double from = 0.0);

/// (||u||_L2, ||u||_H1, I(u), int u^3) of a snapshot.
std::vector<double> distance_observables(const Snapshot& s);
/// Per-observable standard deviation over the union of both clouds.
std::vector<double> pooled_scales(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Energy distance between the observable clouds after dividing each
/// coordinate by scales (pooled_scales when empty), V-statistic form.
/// SE by the delete-one-replica jackknife, replicas identified by id across
/// both measures. Throws on an empty measure or grid mismatch.
Estimate measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, std::span<const double> scales = {});

struct FellerProbeResult {
    double initial_gap = 0.0;  ///< ||u0 - v0||_H1
    std::vector<double> times;
    /// divergence[r][i] = sup_{s <= times[i]} ||u_s - v_s||_H1 for replica r.
    std::vector<std::vector<double>> divergence;
    /// l2_gap[r][i] = ||u - v||_L2 at times[i].
    std::vector<std::vector<double>> l2_gap;
    /// h1_gap[r][i] = ||u - v||_H1 at times[i].
    std::vector<std::vector<double>> h1_gap;
    /// rate g of the fit median divergence ~ gap * exp(g t).
    double growth_rate = 0.0;
    /// exp(growth_rate * T).
    double growth_constant = 1.0;
    /// Fraction of replicas whose divergence stayed <= gap * exp(g t) throughout.
    double fraction_within = 0.0;

    /// Median over replicas of divergence at the final time.
    double final_median() const;
    /// Median over replicas of ||u_T - v_T||_H1.
    double final_median_gap() const;
};

struct FellerOptions {
    std::size_t observe_every = 10;
    unsigned threads = 0;
    std::uint64_t first_stream = 0;
};

/// Evolves u0 and v0 under the same noise path for each replica pair.
FellerProbeResult feller_probe(const Field& u0, const Field& v0, const SimParams& params, double horizon,
                               std::size_t replicas, const FellerOptions& options = {});

/// Writes manifest.json plus replica_<id>.bin into dir (created if needed).
void write_measure(const std::filesystem::path& dir, const EmpiricalMeasure& mu);
EmpiricalMeasure read_measure(const std::filesystem::path& dir);

}  // namespace skdv
