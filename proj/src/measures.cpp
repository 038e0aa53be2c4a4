#include "skdv/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "skdv/parallel.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

namespace {

std::size_t stride_steps(double stride, double dt, const char* what)
{
    if (!(stride > 0.0)) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
    const double ratio = stride / dt;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio) {
        throw std::invalid_argument(std::string(what) + " must be a positive multiple of dt");
    }
    return static_cast<std::size_t>(k);
}

// Contiguous [begin, end) ranges of each replica's snapshots.
std::vector<std::pair<std::size_t, std::size_t>> replica_ranges(const EmpiricalMeasure& mu)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= mu.snapshots.size(); ++i) {
        if (i == mu.snapshots.size() || mu.snapshots[i].replica != mu.snapshots[begin].replica) {
            out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

Estimate over_replicas(std::span<const double> replica_values)
{
    return mean_and_se(replica_values);
}

}  // namespace

bool EmpiricalMeasure::has_coefficients() const
{
    return !snapshots.empty() && std::all_of(snapshots.begin(), snapshots.end(), [&](const Snapshot& s) {
        return s.coefficients.size() == grid.spectral_size();
    });
}

std::vector<std::uint64_t> EmpiricalMeasure::replicas() const
{
    std::vector<std::uint64_t> ids;
    for (const auto& s : snapshots) {
        if (ids.empty() || ids.back() != s.replica) {
            ids.push_back(s.replica);
        }
    }
    return ids;
}

EmpiricalMeasure EmpiricalMeasure::truncated(double h) const
{
    EmpiricalMeasure out = *this;
    out.snapshots.clear();
    out.horizon = h;
    const double eps = 1e-9 * std::max(1.0, h);
    for (const auto& s : snapshots) {
        if (s.t <= h + eps) {
            out.snapshots.push_back(s);
        }
    }
    return out;
}

void EmpiricalMeasure::validate() const
{
    if (snapshots.empty()) {
        throw std::invalid_argument("empirical measure has no snapshots");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("empirical measure horizon must be positive");
    }
    std::vector<std::uint64_t> seen;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const auto& s = snapshots[i];
        if (!s.coefficients.empty() && s.coefficients.size() != grid.spectral_size()) {
            throw std::invalid_argument("snapshot coefficients do not match the grid");
        }
        if (i == 0 || s.replica != snapshots[i - 1].replica) {
            if (std::find(seen.begin(), seen.end(), s.replica) != seen.end()) {
                throw std::invalid_argument("replica snapshots are not contiguous");
            }
            seen.push_back(s.replica);
        } else if (!(s.t > snapshots[i - 1].t)) {
            throw std::invalid_argument("replica snapshots are not in time order");
        }
    }
}

EmpiricalMeasure kb_average(const SimParams& params, double horizon, double stride, const KbOptions& options)
{
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("kb_average horizon must be positive");
    }
    if (stride > horizon) {
        throw std::invalid_argument("snapshot stride exceeds the horizon");
    }
    if (options.replicas == 0) {
        throw std::invalid_argument("kb_average needs at least one replica");
    }
    SimParams p = params;
    p.t_end = horizon;
    p.validate();
    const std::size_t every = stride_steps(stride, p.dt, "snapshot stride");
    const Grid grid = p.grid();
    const NoiseOperator noise = p.noise.build(grid);
    const Field forcing = build_forcing(p.forcing, grid);
    const FunctionalEvaluator evaluate(forcing, noise, p.lambda);

    std::vector<std::vector<Snapshot>> per_replica(options.replicas);
    std::vector<std::optional<std::pair<TrajectoryStatus, double>>> failures(options.replicas);
    parallel_for(options.replicas, options.threads, [&](std::size_t r) {
        Stepper stepper(p, noise);
        const std::uint64_t id = options.first_replica + r;
        auto& out = per_replica[r];
        const std::vector<Observer> observers{[&](const TrajectoryState& s) {
            if (s.step > 0 && s.t >= options.burn_in - 1e-9 * std::max(1.0, options.burn_in)) {
                Snapshot snap;
                snap.t = s.t;
                snap.replica = id;
                snap.functionals = evaluate(s.t, s.u);
                if (options.keep_coefficients) {
                    const auto c = s.u.coefficients();
                    snap.coefficients.assign(c.begin(), c.end());
                }
                out.push_back(std::move(snap));
            }
            return std::vector<double>{};
        }};
        IntegrateOptions io;
        io.observe_every = every;
        const TrajectoryRecord rec = integrate(stepper, make_initial_state(p, Field(grid), id), observers, io);
        if (rec.status != TrajectoryStatus::ok) {
            failures[r] = std::make_pair(rec.status, rec.failure_time);
        }
    });
    for (std::size_t r = 0; r < options.replicas; ++r) {
        if (failures[r]) {
            std::ostringstream msg;
            msg << "kb_average replica " << options.first_replica + r << " " << to_string(failures[r]->first)
                << " at t=" << failures[r]->second;
            throw InstabilityError(msg.str(), r, failures[r]->second, failures[r]->first);
        }
    }

    EmpiricalMeasure mu;
    mu.grid = grid;
    mu.horizon = horizon;
    mu.stride = stride;
    mu.burn_in = options.burn_in;
    mu.seed = p.seed;
    mu.params_hash = options.params_hash;
    for (auto& v : per_replica) {
        for (auto& s : v) {
            mu.snapshots.push_back(std::move(s));
        }
    }
    mu.validate();
    return mu;
}

Estimate tail_mass(const EmpiricalMeasure& mu, std::size_t cutoff)
{
    mu.validate();
    if (!mu.has_coefficients()) {
        throw std::invalid_argument("tail_mass needs snapshot coefficients");
    }
    if (cutoff >= mu.grid.modes()) {
        throw std::invalid_argument("tail cutoff must be below the grid size");
    }
    std::vector<double> replica_means;
    for (const auto& [begin, end] : replica_ranges(mu)) {
        std::vector<double> tails;
        tails.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const auto& c = mu.snapshots[i].coefficients;
            double s = 0.0;
            for (std::size_t k = cutoff; k < c.size(); ++k) {
                s += mu.grid.multiplicity(k) * std::norm(c[k]);
            }
            tails.push_back(s);
        }
        replica_means.push_back(compensated_sum(tails) / static_cast<double>(tails.size()));
    }
    return over_replicas(replica_means);
}

double energy_identity_residual(std::span<const double> times, std::span<const double> l2_sq,
                                std::span<const double> uf, std::size_t first, double window, double lambda,
                                double phi_hs_sq)
{
    if (times.size() != l2_sq.size() || times.size() != uf.size()) {
        throw std::invalid_argument("energy identity: series differ in length");
    }
    if (first >= times.size()) {
        throw std::invalid_argument("energy identity: window start outside the record");
    }
    if (window < 0.0) {
        throw std::invalid_argument("energy identity: negative window");
    }
    const double t0 = times[first];
    const double eps = 1e-9 * std::max(1.0, std::abs(t0) + window);
    std::size_t last = first;
    while (last + 1 < times.size() && times[last + 1] <= t0 + window + eps) {
        ++last;
    }
    if (std::abs(times[last] - t0 - window) > eps) {
        throw std::invalid_argument("energy identity: window exceeds the record");
    }
    const double T = times[last] - t0;
    double forcing_part = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const double h = times[i + 1] - times[i];
        const double a = std::exp(-2.0 * lambda * (times[last] - times[i])) * uf[i];
        const double b = std::exp(-2.0 * lambda * (times[last] - times[i + 1])) * uf[i + 1];
        forcing_part += 0.5 * h * (a + b);
    }
    const double noise_part = lambda > 0.0 ? phi_hs_sq * (-std::expm1(-2.0 * lambda * T)) / (2.0 * lambda)
                                           : phi_hs_sq * T;
    return l2_sq[last] - std::exp(-2.0 * lambda * T) * l2_sq[first] - 2.0 * forcing_part - noise_part;
}

Estimate energy_identity_residual(const MomentSeries& series, double window, double from)
{
    const auto& t = series.times;
    if (t.empty() || series.size() == 0) {
        throw std::invalid_argument("energy identity: empty series");
    }
    if (t.back() - std::max(from, t.front()) < window - 1e-9 * std::max(1.0, window)) {
        throw std::invalid_argument("energy identity: window exceeds the record");
    }
    const double eps = 1e-9 * std::max(1.0, t.back());
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= from - eps && t[i] + window <= t.back() + eps) {
            starts.push_back(i);
        }
    }
    std::vector<double> per_path(series.size());
    std::vector<double> l2(t.size());
    std::vector<double> uf(t.size());
    const double lambda = series.lambda;
    for (std::size_t j = 0; j < series.size(); ++j) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            l2[i] = series.paths[j][i].l2_sq;
            uf[i] = series.paths[j][i].uf;
        }
        std::vector<double> r;
        r.reserve(starts.size());
        for (std::size_t s : starts) {
            if (series.quadrature.empty()) {
                r.push_back(energy_identity_residual(t, l2, uf, s, window, lambda, series.phi_hs_sq));
                continue;
            }
            // Same residual with the forcing integral taken over the steps.
            std::size_t last = s;
            while (last + 1 < t.size() && t[last + 1] <= t[s] + window + eps) {
                ++last;
            }
            const double T = t[last] - t[s];
            double forcing_part = 0.0;
            for (std::size_t i = s; i < last; ++i) {
                forcing_part += std::exp(-2.0 * lambda * (t[last] - t[i + 1])) * series.quadrature[j][i].uf_discounted;
            }
            const double noise_part = lambda > 0.0
                                          ? series.phi_hs_sq * (-std::expm1(-2.0 * lambda * T)) / (2.0 * lambda)
                                          : series.phi_hs_sq * T;
            r.push_back(l2[last] - std::exp(-2.0 * lambda * T) * l2[s] - 2.0 * forcing_part - noise_part);
        }
        per_path[j] = compensated_sum(r) / static_cast<double>(r.size());
    }
    return mean_and_se(per_path);
}

Estimate increment_moment(const EmpiricalMeasure& mu, double lag, double from)
{
    mu.validate();
    if (!mu.has_coefficients()) {
        throw std::invalid_argument("increment_moment needs snapshot coefficients");
    }
    if (lag < 0.0) {
        throw std::invalid_argument("increment lag must be nonnegative");
    }
    std::size_t shift = 0;
    if (lag > 0.0) {
        shift = stride_steps(lag, mu.stride, "increment lag");
    }
    std::vector<double> replica_means;
    for (const auto& [begin, end] : replica_ranges(mu)) {
        std::vector<double> incs;
        for (std::size_t i = begin; i + shift < end; ++i) {
            if (mu.snapshots[i].t < from - 1e-9 * std::max(1.0, from)) {
                continue;
            }
            const auto& a = mu.snapshots[i].coefficients;
            const auto& b = mu.snapshots[i + shift].coefficients;
            double s = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) {
                s += mu.grid.multiplicity(k) * std::norm(b[k] - a[k]);
            }
            incs.push_back(s);
        }
        if (incs.empty()) {
            throw std::invalid_argument("increment lag exceeds the record span");
        }
        replica_means.push_back(compensated_sum(incs) / static_cast<double>(incs.size()));
    }
    return over_replicas(replica_means);
}

std::vector<double> distance_observables(const Snapshot& s)
{
    const auto& f = s.functionals;
    return {std::sqrt(f.l2_sq), std::sqrt(f.h1_sq), f.I, f.cubic};
}

std::vector<double> pooled_scales(const EmpiricalMeasure& a, const EmpiricalMeasure& b)
{
    std::vector<std::vector<double>> cols(4);
    for (const auto* mu : {&a, &b}) {
        for (const auto& s : mu->snapshots) {
            const auto o = distance_observables(s);
            for (std::size_t d = 0; d < 4; ++d) {
                cols[d].push_back(o[d]);
            }
        }
    }
    std::vector<double> scales(4, 1.0);
    for (std::size_t d = 0; d < 4; ++d) {
        const Estimate e = mean_and_se(cols[d]);
        const double sd = e.se * std::sqrt(static_cast<double>(cols[d].size()));
        scales[d] = sd > 0.0 ? sd : 1.0;
    }
    return scales;
}

Estimate measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, std::span<const double> scales)
{
    if (a.snapshots.empty() || b.snapshots.empty()) {
        throw std::invalid_argument("measure_distance: empty measure");
    }
    require_same_grid(a.grid, b.grid);
    std::vector<double> sc(scales.begin(), scales.end());
    if (sc.empty()) {
        sc = pooled_scales(a, b);
    }
    if (sc.size() != 4) {
        throw std::invalid_argument("measure_distance needs one scale per observable");
    }

    std::map<std::uint64_t, std::size_t> index;
    const auto points = [&](const EmpiricalMeasure& mu, std::vector<std::size_t>& rep) {
        std::vector<std::array<double, 4>> p;
        p.reserve(mu.size());
        for (const auto& s : mu.snapshots) {
            const auto o = distance_observables(s);
            p.push_back({o[0] / sc[0], o[1] / sc[1], o[2] / sc[2], o[3] / sc[3]});
            rep.push_back(index.emplace(s.replica, index.size()).first->second);
        }
        return p;
    };
    std::vector<std::size_t> ra;
    std::vector<std::size_t> rb;
    const auto pa = points(a, ra);
    const auto pb = points(b, rb);
    const std::size_t R = index.size();

    // Block sums of pairwise distances, blocks indexed by replica.
    const auto block = [R](const auto& p, const auto& rp, const auto& q, const auto& rq) {
        std::vector<double> S(R * R, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::vector<double> row(R, 0.0);
            for (std::size_t j = 0; j < q.size(); ++j) {
                double d2 = 0.0;
                for (std::size_t d = 0; d < 4; ++d) {
                    const double x = p[i][d] - q[j][d];
                    d2 += x * x;
                }
                row[rq[j]] += std::sqrt(d2);
            }
            for (std::size_t r = 0; r < R; ++r) {
                S[rp[i] * R + r] += row[r];
            }
        }
        return S;
    };
    const auto Sab = block(pa, ra, pb, rb);
    const auto Saa = block(pa, ra, pa, ra);
    const auto Sbb = block(pb, rb, pb, rb);
    std::vector<double> na(R, 0.0);
    std::vector<double> nb(R, 0.0);
    for (std::size_t r : ra) na[r] += 1.0;
    for (std::size_t r : rb) nb[r] += 1.0;

    // Distance with replica `skip` removed (skip == R keeps everything).
    const auto distance = [&](std::size_t skip) {
        double ab = 0.0, aa = 0.0, bb = 0.0, ca = 0.0, cb = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            if (r == skip) continue;
            ca += na[r];
            cb += nb[r];
            for (std::size_t s = 0; s < R; ++s) {
                if (s == skip) continue;
                ab += Sab[r * R + s];
                aa += Saa[r * R + s];
                bb += Sbb[r * R + s];
            }
        }
        if (ca == 0.0 || cb == 0.0) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return 2.0 * ab / (ca * cb) - aa / (ca * ca) - bb / (cb * cb);
    };

    Estimate out;
    out.mean = distance(R);
    std::vector<double> loo;
    for (std::size_t r = 0; r < R; ++r) {
        const double v = distance(r);
        if (std::isfinite(v)) {
            loo.push_back(v);
        }
    }
    if (loo.size() >= 2) {
        const double m = compensated_sum(loo) / static_cast<double>(loo.size());
        double ss = 0.0;
        for (double v : loo) {
            ss += (v - m) * (v - m);
        }
        const double g = static_cast<double>(loo.size());
        out.se = std::sqrt((g - 1.0) / g * ss);
    }
    return out;
}

double FellerProbeResult::final_median() const
{
    std::vector<double> last;
    for (const auto& d : divergence) {
        last.push_back(d.back());
    }
    return median(std::move(last));
}

double FellerProbeResult::final_median_gap() const
{
    std::vector<double> last;
    for (const auto& d : h1_gap) {
        last.push_back(d.back());
    }
    return median(std::move(last));
}

FellerProbeResult feller_probe(const Field& u0, const Field& v0, const SimParams& params, double horizon,
                               std::size_t replicas, const FellerOptions& options)
{
    require_same_grid(u0.grid(), v0.grid());
    if (replicas == 0) {
        throw std::invalid_argument("feller_probe needs at least one replica");
    }
    if (options.observe_every == 0) {
        throw std::invalid_argument("observe_every must be positive");
    }
    SimParams p = params;
    p.t_end = horizon;
    p.validate();
    require_same_grid(u0.grid(), p.grid());
    const NoiseOperator noise = p.noise.build(p.grid());
    const std::size_t total = p.step_count();

    FellerProbeResult res;
    res.initial_gap = std::sqrt(h1_norm_sq(u0 - v0));
    res.divergence.resize(replicas);
    res.l2_gap.resize(replicas);
    res.h1_gap.resize(replicas);
    std::vector<std::vector<double>> times(replicas);
    std::vector<std::optional<std::pair<TrajectoryStatus, double>>> failures(replicas);

    parallel_for(replicas, options.threads, [&](std::size_t r) {
        Stepper stepper(p, noise);
        const std::uint64_t stream = options.first_stream + r;
        TrajectoryState a = make_initial_state(p, u0, stream);
        TrajectoryState b = make_initial_state(p, v0, stream);
        double sup = 0.0;
        const auto observe = [&] {
            const Field d = a.u - b.u;
            const double l2 = l2_norm_sq(d);
            const double h1 = std::sqrt(l2 + dx_l2_norm_sq(d));
            sup = std::max(sup, h1);
            times[r].push_back(a.t);
            res.h1_gap[r].push_back(h1);
            res.divergence[r].push_back(sup);
            res.l2_gap[r].push_back(std::sqrt(l2));
        };
        observe();
        while (a.step < total) {
            stepper.step(a);
            stepper.step(b);
            if (!a.ok() || !b.ok()) {
                const auto& bad = a.ok() ? b : a;
                failures[r] = std::make_pair(bad.status, bad.t);
                return;
            }
            if (a.step % options.observe_every == 0) {
                observe();
            }
        }
    });
    for (std::size_t r = 0; r < replicas; ++r) {
        if (failures[r]) {
            std::ostringstream msg;
            msg << "feller_probe pair " << options.first_stream + r << " " << to_string(failures[r]->first)
                << " at t=" << failures[r]->second;
            throw InstabilityError(msg.str(), r, failures[r]->second, failures[r]->first);
        }
    }
    res.times = times.front();

    if (res.initial_gap > 0.0 && res.times.size() > 1) {
        std::vector<double> x;
        std::vector<double> y;
        for (std::size_t i = 1; i < res.times.size(); ++i) {
            std::vector<double> col;
            for (const auto& d : res.divergence) {
                col.push_back(d[i]);
            }
            x.push_back(res.times[i] - res.times.front());
            y.push_back(std::log(median(std::move(col)) / res.initial_gap));
        }
        res.growth_rate = slope_through_origin(x, y);
        res.growth_constant = std::exp(res.growth_rate * x.back());
        std::size_t within = 0;
        for (const auto& d : res.divergence) {
            bool ok = true;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double bound = res.initial_gap * std::exp(res.growth_rate * (res.times[i] - res.times.front()));
                ok = ok && d[i] <= bound * (1.0 + 1e-12);
            }
            within += ok ? 1 : 0;
        }
        res.fraction_within = static_cast<double>(within) / static_cast<double>(replicas);
    } else {
        res.fraction_within = 1.0;
    }
    return res;
}

namespace {

template <typename T>
void put(std::ostream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) {
        throw std::runtime_error("truncated snapshot file");
    }
    return v;
}

constexpr char snapshot_magic[8] = {'S', 'K', 'D', 'V', 'S', 'N', 'A', 'P'};

std::string replica_file(std::uint64_t id)
{
    return "replica_" + std::to_string(id) + ".bin";
}

}  // namespace

void write_measure(const std::filesystem::path& dir, const EmpiricalMeasure& mu)
{
    mu.validate();
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["format"] = "skdv-empirical-measure";
    manifest["version"] = 1;
    manifest["length"] = mu.grid.length();
    manifest["modes"] = mu.grid.modes();
    manifest["horizon"] = mu.horizon;
    manifest["stride"] = mu.stride;
    manifest["burn_in"] = mu.burn_in;
    manifest["seed"] = mu.seed;
    manifest["params_hash"] = mu.params_hash;
    manifest["replicas"] = nlohmann::json::array();

    for (const auto& [begin, end] : replica_ranges(mu)) {
        const std::uint64_t id = mu.snapshots[begin].replica;
        const auto name = replica_file(id);
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        out.write(snapshot_magic, sizeof snapshot_magic);
        put<std::uint64_t>(out, end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const auto& s = mu.snapshots[i];
            put(out, s.t);
            for (double v : to_row(s.functionals)) {
                put(out, v);
            }
            put(out, s.functionals.uf);
            put<std::uint64_t>(out, s.coefficients.size());
            for (const auto& z : s.coefficients) {
                put(out, z.real());
                put(out, z.imag());
            }
        }
        if (!out) {
            throw std::runtime_error("failed writing " + (dir / name).string());
        }
        manifest["replicas"].push_back({{"id", id}, {"file", name}, {"snapshots", end - begin}});
    }
    std::ofstream m(dir / "manifest.json", std::ios::trunc);
    m << manifest.dump(2) << '\n';
    if (!m) {
        throw std::runtime_error("failed writing manifest");
    }
}

EmpiricalMeasure read_measure(const std::filesystem::path& dir)
{
    std::ifstream m(dir / "manifest.json");
    if (!m) {
        throw std::runtime_error("no manifest.json in " + dir.string());
    }
    const auto manifest = nlohmann::json::parse(m);
    if (manifest.value("format", "") != "skdv-empirical-measure" || manifest.value("version", 0) != 1) {
        throw std::runtime_error("unsupported measure manifest");
    }
    EmpiricalMeasure mu;
    mu.grid = Grid(manifest.at("length").get<double>(), manifest.at("modes").get<std::size_t>());
    mu.horizon = manifest.at("horizon").get<double>();
    mu.stride = manifest.at("stride").get<double>();
    mu.burn_in = manifest.at("burn_in").get<double>();
    mu.seed = manifest.at("seed").get<std::uint64_t>();
    mu.params_hash = manifest.at("params_hash").get<std::uint64_t>();
    for (const auto& rep : manifest.at("replicas")) {
        const auto id = rep.at("id").get<std::uint64_t>();
        const auto path = dir / rep.at("file").get<std::string>();
        std::ifstream in(path, std::ios::binary);
        char magic[8];
        in.read(magic, sizeof magic);
        if (!in || !std::equal(magic, magic + 8, snapshot_magic)) {
            throw std::runtime_error("bad snapshot file " + path.string());
        }
        const auto count = get<std::uint64_t>(in);
        if (count != rep.at("snapshots").get<std::uint64_t>()) {
            throw std::runtime_error("snapshot count mismatch in " + path.string());
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            Snapshot s;
            s.replica = id;
            s.t = get<double>(in);
            auto& f = s.functionals;
            for (double* v : {&f.t, &f.l2_sq, &f.dx_l2_sq, &f.h1_sq, &f.I, &f.alpha, &f.cubic, &f.sup_abs, &f.uf}) {
                *v = get<double>(in);
            }
            const auto nc = get<std::uint64_t>(in);
            if (nc != 0 && nc != mu.grid.spectral_size()) {
                throw std::runtime_error("snapshot coefficients do not match the grid");
            }
            s.coefficients.resize(nc);
            for (auto& z : s.coefficients) {
                const double re = get<double>(in);
                const double im = get<double>(in);
                z = Complex(re, im);
            }
            mu.snapshots.push_back(std::move(s));
        }
    }
    mu.validate();
    return mu;
}

}  // namespace skdv
