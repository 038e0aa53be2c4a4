#include "skdv/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "skdv/parallel.hpp"

namespace skdv {

std::string to_string(Moment m)
{
    switch (m) {
    case Moment::l2_sq: return "l2_sq";
    case Moment::l2_4: return "l2_4";
    case Moment::l2_6: return "l2_6";
    case Moment::l2_10_3: return "l2_10_3";
    case Moment::dx_l2_sq: return "dx_l2_sq";
    case Moment::dx_l2_4: return "dx_l2_4";
    case Moment::h1_sq: return "h1_sq";
    case Moment::I: return "I";
    case Moment::I_sq: return "I_sq";
    case Moment::uf: return "uf";
    case Moment::cubic: return "cubic";
    case Moment::alpha: return "alpha";
    case Moment::sup_h1_sq: return "sup_h1_sq";
    }
    return "unknown";
}

const std::vector<Moment>& all_moments()
{
    static const std::vector<Moment> all{Moment::l2_sq, Moment::l2_4,   Moment::l2_6,  Moment::l2_10_3, Moment::dx_l2_sq,
                                         Moment::dx_l2_4, Moment::h1_sq, Moment::I,     Moment::I_sq,    Moment::uf,
                                         Moment::cubic,  Moment::alpha, Moment::sup_h1_sq};
    return all;
}

double MomentSeries::value(Moment m, std::size_t j, std::size_t i) const
{
    const FunctionalSample& s = paths[j][i];
    switch (m) {
    case Moment::l2_sq: return s.l2_sq;
    case Moment::l2_4: return s.l2_sq * s.l2_sq;
    case Moment::l2_6: return s.l2_sq * s.l2_sq * s.l2_sq;
    case Moment::l2_10_3: return std::pow(s.l2_sq, 5.0 / 3.0);
    case Moment::dx_l2_sq: return s.dx_l2_sq;
    case Moment::dx_l2_4: return s.dx_l2_sq * s.dx_l2_sq;
    case Moment::h1_sq: return s.h1_sq;
    case Moment::I: return s.I;
    case Moment::I_sq: return s.I * s.I;
    case Moment::uf: return s.uf;
    case Moment::cubic: return s.cubic;
    case Moment::alpha: return s.alpha;
    case Moment::sup_h1_sq: {
        double m_sup = 0.0;
        for (std::size_t r = 0; r <= i; ++r) {
            m_sup = std::max(m_sup, paths[j][r].h1_sq);
        }
        return m_sup;
    }
    }
    return 0.0;
}

Estimate MomentSeries::at(Moment m, std::size_t i) const
{
    std::vector<double> v(paths.size());
    for (std::size_t j = 0; j < paths.size(); ++j) {
        v[j] = value(m, j, i);
    }
    return mean_and_se(v);
}

std::vector<Estimate> MomentSeries::track(Moment m) const
{
    if (m == Moment::sup_h1_sq) {
        return pathwise([](const std::vector<FunctionalSample>& p, std::size_t i) {
            double s = 0.0;
            for (std::size_t r = 0; r <= i; ++r) {
                s = std::max(s, p[r].h1_sq);
            }
            return s;
        });
    }
    std::vector<Estimate> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        out[i] = at(m, i);
    }
    return out;
}

std::vector<Estimate> MomentSeries::pathwise(
    const std::function<double(const std::vector<FunctionalSample>&, std::size_t)>& fn) const
{
    std::vector<Estimate> out(times.size());
    std::vector<double> v(paths.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < paths.size(); ++j) {
            v[j] = fn(paths[j], i);
        }
        out[i] = mean_and_se(v);
    }
    return out;
}

MomentSeries run_ensemble(const SimParams& params, std::size_t trajectories, const EnsembleOptions& options)
{
    if (trajectories < 2) {
        throw std::invalid_argument("an ensemble needs at least two trajectories");
    }
    params.validate();
    const Grid grid = params.grid();
    const NoiseOperator noise = params.noise.build(grid);
    const Field forcing = build_forcing(params.forcing, grid);
    const FunctionalEvaluator evaluate(forcing, noise, params.lambda);
    const std::vector<Complex> f_hat = forcing.coefficients();
    const double step_decay = std::exp(-2.0 * params.lambda * params.dt);

    struct Outcome {
        std::vector<double> times;
        std::vector<FunctionalSample> path;
        std::vector<IntervalQuadrature> quadrature;
        TrajectoryStatus status = TrajectoryStatus::ok;
        double failure_time = 0.0;
        std::string diagnosis;
    };
    std::vector<std::optional<Outcome>> outcomes(trajectories);

    parallel_for(trajectories, options.threads, [&](std::size_t j) {
        Stepper stepper(params, noise);
        const Field u0 = options.initial ? options.initial(j) : Field(grid);
        TrajectoryState state = make_initial_state(params, u0, options.first_stream + j);
        Outcome out;
        // Running trapezoid over steps; closed into an interval at each sample.
        IntervalQuadrature open;
        double prev_l2 = 0.0;
        double prev_uf = 0.0;
        const auto sample_l2_uf = [&](const Field& u) {
            const auto c = u.spectral_view();
            double uf = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                uf += grid.multiplicity(k) * (c[k].real() * f_hat[k].real() + c[k].imag() * f_hat[k].imag());
            }
            return std::pair{spectral_l2_sq(grid, c), uf};
        };
        const std::vector<Observer> observers{[&](const TrajectoryState& s) {
            out.path.push_back(evaluate(s.t, s.u));
            if (out.path.size() > 1) {
                out.quadrature.push_back(open);
            }
            open = {};
            prev_l2 = out.path.back().l2_sq;
            prev_uf = out.path.back().uf;
            return std::vector<double>{};
        }};
        IntegrateOptions io;
        io.observe_every = options.observe_every;
        io.on_step = [&](const TrajectoryState& s) {
            const auto [l2, uf] = sample_l2_uf(s.u);
            const double h = params.dt;
            open.l2_sq += 0.5 * h * (prev_l2 + l2);
            open.uf += 0.5 * h * (prev_uf + uf);
            open.uf_discounted = step_decay * (open.uf_discounted + 0.5 * h * prev_uf) + 0.5 * h * uf;
            prev_l2 = l2;
            prev_uf = uf;
        };
        TrajectoryRecord rec = integrate(stepper, std::move(state), observers, io);
        out.times = std::move(rec.times);
        out.status = rec.status;
        out.failure_time = rec.failure_time;
        out.diagnosis = rec.final_state.diagnosis;
        outcomes[j] = std::move(out);
    });

    MomentSeries series;
    series.lambda = params.lambda;
    series.dt = params.dt;
    series.phi_hs_sq = std::pow(hs_norm(noise), 2);
    series.f_l2_sq = l2_norm_sq(forcing);
    for (std::size_t j = 0; j < trajectories; ++j) {
        Outcome& o = *outcomes[j];
        if (o.status != TrajectoryStatus::ok) {
            ++series.aborted;
            if (static_cast<double>(series.aborted) > options.max_abort_fraction * static_cast<double>(trajectories)) {
                std::ostringstream msg;
                msg << "ensemble aborted: trajectory " << j << " " << to_string(o.status) << " at t=" << o.failure_time
                    << " (" << o.diagnosis << "); " << series.aborted << " of " << trajectories << " lost";
                throw InstabilityError(msg.str(), j, o.failure_time, o.status);
            }
            continue;
        }
        if (series.times.empty()) {
            series.times = o.times;
        }
        series.paths.push_back(std::move(o.path));
        series.quadrature.push_back(std::move(o.quadrature));
        series.streams.push_back(options.first_stream + j);
    }
    return series;
}

std::vector<Estimate> energy_balance_residual(const MomentSeries& series)
{
    const auto& t = series.times;
    const double lambda = series.lambda;
    const double hs_sq = series.phi_hs_sq;
    std::vector<std::vector<double>> residual(series.size());
    for (std::size_t j = 0; j < series.size(); ++j) {
        const auto& p = series.paths[j];
        std::vector<double> l2(p.size());
        std::vector<double> uf(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            l2[i] = p[i].l2_sq;
            uf[i] = p[i].uf;
        }
        std::vector<double> int_l2;
        std::vector<double> int_uf;
        if (series.quadrature.empty()) {
            int_l2 = cumulative_trapezoid(t, l2);
            int_uf = cumulative_trapezoid(t, uf);
        } else {
            const auto& q = series.quadrature[j];
            int_l2.assign(p.size(), 0.0);
            int_uf.assign(p.size(), 0.0);
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                int_l2[i + 1] = int_l2[i] + q[i].l2_sq;
                int_uf[i + 1] = int_uf[i] + q[i].uf;
            }
        }
        residual[j].resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double elapsed = t[i] - t[0];
            residual[j][i] = l2[i] + 2.0 * lambda * int_l2[i] - l2[0] - elapsed * hs_sq - 2.0 * int_uf[i];
        }
    }
    std::vector<Estimate> out(t.size());
    std::vector<double> v(series.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < series.size(); ++j) {
            v[j] = residual[j][i];
        }
        out[i] = mean_and_se(v);
    }
    return out;
}

double energy_envelope(double t, double initial_l2_sq, double lambda, double phi_hs_sq, double f_l2_sq)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("energy envelope needs lambda > 0");
    }
    const double decay = std::exp(-lambda * t);
    return decay * initial_l2_sq + (phi_hs_sq + f_l2_sq / lambda) * (-std::expm1(-lambda * t)) / lambda;
}

CheckReport no_growth_check(const MomentSeries& series, Moment m, double se_factor)
{
    CheckReport r;
    r.name = "no-growth:" + to_string(m);
    const auto track = series.track(m);
    const double horizon = series.times.back();
    const double split = series.times.front() + 0.5 * (horizon - series.times.front());
    std::size_t first = 0;
    std::size_t second = track.size();
    for (std::size_t i = 0; i < track.size(); ++i) {
        if (series.times[i] <= split) {
            if (track[i].mean > track[first].mean) first = i;
        } else if (second == track.size() || track[i].mean > track[second].mean) {
            second = i;
        }
    }
    if (second == track.size()) {
        r.passed = false;
        r.detail = "horizon too short for a two-window test";
        return r;
    }
    const double se = std::hypot(track[first].se, track[second].se);
    r.worst_margin = track[first].mean + se_factor * se - track[second].mean;
    r.passed = r.worst_margin >= 0.0;
    std::ostringstream d;
    d << "first-half max " << track[first].mean << " (t=" << series.times[first] << "), second-half max "
      << track[second].mean << " (t=" << series.times[second] << "), combined SE " << se;
    r.detail = d.str();
    return r;
}

CheckReport moment_bound_check(const MomentSeries& series, int k)
{
    if (k < 1 || k > 3) {
        throw std::invalid_argument("moment power k must be 1, 2 or 3");
    }
    if (k >= 2) {
        CheckReport r = no_growth_check(series, k == 2 ? Moment::l2_4 : Moment::l2_6);
        r.name = "moment-bound:k=" + std::to_string(k);
        return r;
    }
    CheckReport r;
    r.name = "moment-bound:k=1";
    const auto track = series.track(Moment::l2_sq);
    const double e0 = track.front().mean;
    r.worst_margin = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    // At t0 the envelope is the initial mean itself; the tightest point is
    // reported among later times.
    bool ok = true;
    for (std::size_t i = 0; i < track.size(); ++i) {
        const double env =
            energy_envelope(series.times[i] - series.times.front(), e0, series.lambda, series.phi_hs_sq, series.f_l2_sq);
        const double margin = env + 3.0 * track[i].se - track[i].mean;
        ok = ok && margin >= 0.0;
        if ((i > 0 || track.size() == 1) && margin < r.worst_margin) {
            r.worst_margin = margin;
            worst = i;
        }
    }
    r.passed = ok;
    std::ostringstream d;
    d << "tightest at t=" << series.times[worst] << ": E||u||^2=" << track[worst].mean << " se=" << track[worst].se;
    r.detail = d.str();
    return r;
}

CheckReport h1_bound_check(const MomentSeries& series, double sandwich_constant)
{
    CheckReport r;
    r.name = "h1-bound";
    r.passed = true;
    r.worst_margin = std::numeric_limits<double>::infinity();
    std::ostringstream d;
    for (Moment m : {Moment::dx_l2_sq, Moment::dx_l2_4, Moment::I_sq}) {
        const CheckReport sub = no_growth_check(series, m);
        r.passed = r.passed && sub.passed;
        r.worst_margin = std::min(r.worst_margin, sub.worst_margin);
        d << sub.name << (sub.passed ? " ok; " : " FAILED; ");
    }
    const auto dx2 = series.track(Moment::dx_l2_sq);
    const auto l10 = series.track(Moment::l2_10_3);
    const auto I = series.track(Moment::I);
    bool sandwich_ok = true;
    for (std::size_t i = 0; i < I.size(); ++i) {
        const double se = std::sqrt(I[i].se * I[i].se + dx2[i].se * dx2[i].se + l10[i].se * l10[i].se * sandwich_constant);
        const double lower = 2.0 / 3.0 * dx2[i].mean - sandwich_constant * l10[i].mean;
        const double upper = 4.0 / 3.0 * dx2[i].mean + sandwich_constant * l10[i].mean;
        const double margin = std::min(I[i].mean - lower, upper - I[i].mean) + 3.0 * se;
        r.worst_margin = std::min(r.worst_margin, margin);
        sandwich_ok = sandwich_ok && margin >= 0.0;
    }
    r.passed = r.passed && sandwich_ok;
    d << "E[I] sandwich " << (sandwich_ok ? "ok" : "FAILED");
    r.detail = d.str();
    return r;
}

FiniteTimeSupReport finite_time_sup_check(const SimParams& params, std::size_t trajectories, double horizon,
                                          double radius, const Field& profile, const EnsembleOptions& options)
{
    if (!(radius > 0.0)) {
        throw std::invalid_argument("radius must be positive");
    }
    const double profile_h1 = std::sqrt(h1_norm_sq(profile));
    if (!(profile_h1 > 0.0)) {
        throw std::invalid_argument("initial-condition profile must be nonzero");
    }
    SimParams p = params;
    p.t_end = horizon;
    FiniteTimeSupReport report;
    report.radii = {0.0, 0.5 * radius, radius};
    report.finite = true;
    report.monotone = true;
    for (double r : report.radii) {
        EnsembleOptions o = options;
        const Field u0 = profile * (r / profile_h1);
        o.initial = [u0](std::size_t) { return u0; };
        const MomentSeries s = run_ensemble(p, trajectories, o);
        const Estimate e = s.track(Moment::sup_h1_sq).back();
        report.finite = report.finite && std::isfinite(e.mean) && std::isfinite(e.se);
        if (!report.sup_h1_sq.empty()) {
            const Estimate& prev = report.sup_h1_sq.back();
            report.monotone = report.monotone && e.mean >= prev.mean - 3.0 * std::hypot(e.se, prev.se);
        }
        report.sup_h1_sq.push_back(e);
    }
    return report;
}

}  // namespace skdv
