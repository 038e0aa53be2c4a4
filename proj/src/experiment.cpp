#include "skdv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "skdv/checkpoint.hpp"
#include "skdv/ensemble.hpp"
#include "skdv/functionals.hpp"
#include "skdv/measures.hpp"
#include "skdv/random_fields.hpp"
#include "skdv/spectral.hpp"

namespace skdv {

// ---------------------------------------------------------------- config

ExperimentKind parse_experiment_kind(const std::string& name)
{
    static const std::map<std::string, ExperimentKind> kinds{
        {"conservation", ExperimentKind::conservation}, {"linear-exact", ExperimentKind::linear_exact},
        {"moment-suite", ExperimentKind::moment_suite}, {"kb-suite", ExperimentKind::kb_suite},
        {"feller-suite", ExperimentKind::feller_suite}, {"custom", ExperimentKind::custom}};
    const auto it = kinds.find(name);
    if (it == kinds.end()) {
        throw ConfigError("unknown experiment kind '" + name + "'");
    }
    return it->second;
}

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::conservation: return "conservation";
    case ExperimentKind::linear_exact: return "linear-exact";
    case ExperimentKind::moment_suite: return "moment-suite";
    case ExperimentKind::kb_suite: return "kb-suite";
    case ExperimentKind::feller_suite: return "feller-suite";
    case ExperimentKind::custom: return "custom";
    }
    return "custom";
}

namespace {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": '" + value + "' is not a finite number");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value)
{
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(key + ": '" + value + "' is not a nonnegative integer");
    }
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + value + "' is out of range");
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& items)
{
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        s += (i ? "," : "") + items[i];
    }
    return s;
}

InitialShape parse_initial(const std::string& key, const std::string& v)
{
    if (v == "zero") return InitialShape::zero;
    if (v == "soliton") return InitialShape::soliton;
    if (v == "band-limited") return InitialShape::band_limited;
    throw ConfigError(key + ": unknown initial shape '" + v + "'");
}

std::string initial_name(InitialShape s)
{
    switch (s) {
    case InitialShape::zero: return "zero";
    case InitialShape::soliton: return "soliton";
    case InitialShape::band_limited: return "band-limited";
    }
    return "zero";
}

struct Binding {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

Binding real_key(std::string key, double ExperimentConfig::*m)
{
    return {key, [m, key](ExperimentConfig& c, const std::string& v) { c.*m = parse_double(key, v); },
            [m](const ExperimentConfig& c) { return format_double(c.*m); }};
}

Binding real_param(std::string key, std::function<double&(SimParams&)> ref)
{
    return {key, [ref, key](ExperimentConfig& c, const std::string& v) { ref(c.params) = parse_double(key, v); },
            [ref](const ExperimentConfig& c) {
                SimParams p = c.params;
                return format_double(ref(p));
            }};
}

template <typename T>
Binding count_param(std::string key, std::function<T&(ExperimentConfig&)> ref)
{
    return {key,
            [ref, key](ExperimentConfig& c, const std::string& v) { ref(c) = static_cast<T>(parse_unsigned(key, v)); },
            [ref](const ExperimentConfig& c) {
                ExperimentConfig copy = c;
                return std::to_string(ref(copy));
            }};
}

Binding bool_key(std::string key, std::function<bool&(ExperimentConfig&)> ref)
{
    return {key, [ref, key](ExperimentConfig& c, const std::string& v) { ref(c) = parse_bool(key, v); },
            [ref](const ExperimentConfig& c) {
                ExperimentConfig copy = c;
                return std::string(ref(copy) ? "true" : "false");
            }};
}

const std::vector<Binding>& bindings()
{
    using C = ExperimentConfig;
    static const std::vector<Binding> all = [] {
        std::vector<Binding> b;
        b.push_back({"kind", [](C& c, const std::string& v) { c.kind = parse_experiment_kind(v); },
                     [](const C& c) { return to_string(c.kind); }});
        b.push_back(count_param<std::uint64_t>("seed", [](C& c) -> std::uint64_t& { return c.params.seed; }));
        b.push_back(real_param("length_space", [](SimParams& p) -> double& { return p.length; }));
        b.push_back(count_param<std::size_t>("modes", [](C& c) -> std::size_t& { return c.params.modes; }));
        b.push_back(real_param("lambda_per_time", [](SimParams& p) -> double& { return p.lambda; }));
        b.push_back(real_param("dt_time", [](SimParams& p) -> double& { return p.dt; }));
        b.push_back(real_param("t_end_time", [](SimParams& p) -> double& { return p.t_end; }));
        b.push_back({"dealias",
                     [](C& c, const std::string& v) {
                         c.params.dealias = parse_bool("dealias", v) ? Dealias::on : Dealias::off;
                     },
                     [](const C& c) { return std::string(c.params.dealias == Dealias::on ? "on" : "off"); }});
        b.push_back(bool_key("nonlinear", [](C& c) -> bool& { return c.params.nonlinear; }));
        b.push_back({"forcing_shape",
                     [](C& c, const std::string& v) {
                         try {
                             c.params.forcing.shape = parse_forcing_shape(v);
                         } catch (const std::exception& e) {
                             throw ConfigError(std::string("forcing_shape: ") + e.what());
                         }
                     },
                     [](const C& c) { return to_string(c.params.forcing.shape); }});
        b.push_back(real_param("forcing_amplitude", [](SimParams& p) -> double& { return p.forcing.amplitude; }));
        b.push_back(real_param("forcing_width_space", [](SimParams& p) -> double& { return p.forcing.width; }));
        b.push_back(real_param("forcing_center_space", [](SimParams& p) -> double& { return p.forcing.center; }));
        b.push_back(count_param<std::size_t>("forcing_cutoff_mode",
                                             [](C& c) -> std::size_t& { return c.params.forcing.cutoff_mode; }));
        b.push_back(count_param<std::uint64_t>("forcing_seed",
                                               [](C& c) -> std::uint64_t& { return c.params.forcing.seed; }));
        b.push_back(real_param("noise_hs_norm", [](SimParams& p) -> double& { return p.noise.hs_norm; }));
        b.push_back(real_param("noise_decay", [](SimParams& p) -> double& { return p.noise.decay; }));
        b.push_back(count_param<std::size_t>("noise_cutoff_mode",
                                             [](C& c) -> std::size_t& { return c.params.noise.cutoff_mode; }));
        b.push_back(real_param("blowup_ceiling", [](SimParams& p) -> double& { return p.blowup_ceiling; }));
        b.push_back(real_param("cfl_limit", [](SimParams& p) -> double& { return p.cfl_limit; }));
        b.push_back(count_param<std::size_t>("checkpoint_every_steps",
                                             [](C& c) -> std::size_t& { return c.params.checkpoint_every; }));
        b.push_back(count_param<std::size_t>("observe_every_steps", [](C& c) -> std::size_t& { return c.observe_every; }));
        b.push_back(count_param<std::size_t>("trajectories", [](C& c) -> std::size_t& { return c.trajectories; }));
        b.push_back(bool_key("refine", [](C& c) -> bool& { return c.refine; }));
        b.push_back({"initial", [](C& c, const std::string& v) { c.initial = parse_initial("initial", v); },
                     [](const C& c) { return initial_name(c.initial); }});
        b.push_back(real_key("initial_speed", &C::initial_speed));
        b.push_back(real_key("initial_center_space", &C::initial_center));
        b.push_back(real_key("initial_h1_norm", &C::initial_h1_norm));
        b.push_back(count_param<std::size_t>("initial_max_mode", [](C& c) -> std::size_t& { return c.initial_max_mode; }));
        b.push_back(count_param<std::uint64_t>("initial_seed", [](C& c) -> std::uint64_t& { return c.initial_seed; }));
        b.push_back(real_key("horizon_time", &C::horizon));
        b.push_back(real_key("stride_time", &C::stride));
        b.push_back(count_param<std::size_t>("replicas", [](C& c) -> std::size_t& { return c.replicas; }));
        b.push_back(real_key("burn_in_time", &C::burn_in));
        b.push_back({"tail_cutoffs",
                     [](C& c, const std::string& v) {
                         c.tail_cutoffs.clear();
                         for (const auto& s : split_list(v)) {
                             c.tail_cutoffs.push_back(parse_unsigned("tail_cutoffs", s));
                         }
                     },
                     [](const C& c) {
                         std::vector<std::string> s;
                         for (auto k : c.tail_cutoffs) s.push_back(std::to_string(k));
                         return join(s);
                     }});
        b.push_back({"increment_lags_time",
                     [](C& c, const std::string& v) {
                         c.increment_lags.clear();
                         for (const auto& s : split_list(v)) {
                             c.increment_lags.push_back(parse_double("increment_lags_time", s));
                         }
                     },
                     [](const C& c) {
                         std::vector<std::string> s;
                         for (auto d : c.increment_lags) s.push_back(format_double(d));
                         return join(s);
                     }});
        b.push_back(bool_key("kb_distances", [](C& c) -> bool& { return c.kb_distances; }));
        b.push_back(bool_key("persist_measure", [](C& c) -> bool& { return c.persist_measure; }));
        b.push_back(count_param<std::size_t>("sandwich_fields", [](C& c) -> std::size_t& { return c.sandwich_fields; }));
        b.push_back(count_param<std::size_t>("alpha_fields", [](C& c) -> std::size_t& { return c.alpha_fields; }));
        b.push_back(real_key("constants_max_h1", &C::constants_max_h1));
        b.push_back(count_param<std::uint64_t>("constants_seed", [](C& c) -> std::uint64_t& { return c.constants_seed; }));
        b.push_back(real_key("identity_window_time", &C::identity_window));
        b.push_back(real_key("identity_from_time", &C::identity_from));
        b.push_back(real_key("feller_gap", &C::feller_gap));
        b.push_back(real_key("feller_linear_gap", &C::feller_linear_gap));
        b.push_back(count_param<unsigned>("threads", [](C& c) -> unsigned& { return c.threads; }));
        b.push_back({"output_dir", [](C& c, const std::string& v) { c.output_dir = v; },
                     [](const C& c) { return c.output_dir.string(); }});
        b.push_back({"report_format",
                     [](C& c, const std::string& v) {
                         if (v != "csv" && v != "json") {
                             throw ConfigError("report_format must be csv or json");
                         }
                         c.report_format = v;
                     },
                     [](const C& c) { return c.report_format; }});
        std::sort(b.begin(), b.end(), [](const Binding& x, const Binding& y) { return x.key < y.key; });
        return b;
    }();
    return all;
}

const Binding* find_binding(const std::string& key)
{
    for (const auto& b : bindings()) {
        if (b.key == key) return &b;
    }
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& b : bindings()) k.push_back(b.key);
        return k;
    }();
    return keys;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text)
{
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Binding* b = find_binding(key);
        if (!b) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        seen.push_back(key);
        b->set(c, value);
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ExperimentConfig::validate() const
{
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (observe_every == 0) fail("observe_every_steps must be positive");
    if (!(initial_speed > 0.0)) fail("initial_speed must be positive");
    if (!(initial_h1_norm >= 0.0)) fail("initial_h1_norm must be nonnegative");
    if (initial_max_mode == 0 || initial_max_mode >= params.modes / 2) fail("initial_max_mode out of range");
    if (!(identity_window >= 0.0) || !(identity_from >= 0.0)) fail("identity window keys must be nonnegative");
    if (!(constants_max_h1 > 0.0)) fail("constants_max_h1 must be positive");
    for (double d : increment_lags) {
        if (!(d > 0.0)) fail("increment lags must be positive");
    }
    const auto multiple_of_dt = [&](double v) {
        const double r = v / params.dt;
        return std::abs(r - std::round(r)) <= 1e-6 * std::max(1.0, r);
    };
    switch (kind) {
    case ExperimentKind::conservation:
        if (initial != InitialShape::soliton) fail("conservation needs initial = soliton");
        if (params.lambda != 0.0 || params.noise.hs_norm != 0.0 || params.forcing.shape != ForcingShape::zero) {
            fail("conservation needs lambda_per_time = 0, noise_hs_norm = 0 and forcing_shape = zero");
        }
        if (!(params.t_end > 0.0)) fail("conservation needs t_end_time > 0");
        break;
    case ExperimentKind::linear_exact:
        if (params.nonlinear) fail("linear-exact needs nonlinear = false");
        if (params.noise.hs_norm != 0.0 || params.forcing.shape != ForcingShape::zero) {
            fail("linear-exact needs noise_hs_norm = 0 and forcing_shape = zero");
        }
        if (initial == InitialShape::zero) fail("linear-exact needs a nonzero initial condition");
        break;
    case ExperimentKind::moment_suite:
        if (trajectories < 2) fail("moment-suite needs trajectories >= 2");
        if (!(params.lambda > 0.0)) fail("moment-suite needs lambda_per_time > 0");
        if (!(params.t_end > 0.0)) fail("moment-suite needs t_end_time > 0");
        if (identity_from + identity_window > params.t_end + 1e-9) fail("identity window exceeds t_end_time");
        break;
    case ExperimentKind::kb_suite:
        if (replicas < 2) fail("kb-suite needs replicas >= 2");
        for (auto k : tail_cutoffs) {
            if (k > params.modes / 2) fail("tail cutoff above the Nyquist mode");
        }
        if (!(horizon > 0.0) || !(stride > 0.0)) fail("kb-suite needs horizon_time and stride_time > 0");
        if (stride > horizon) fail("stride_time exceeds horizon_time");
        if (!multiple_of_dt(stride) || !multiple_of_dt(2.0 * horizon)) fail("stride and horizon must be multiples of dt");
        if (kb_distances && !multiple_of_dt(horizon / 4.0)) fail("horizon_time / 4 must be a multiple of dt_time");
        for (double d : increment_lags) {
            const double r = d / stride;
            if (std::abs(r - std::round(r)) > 1e-9 * r) fail("increment lags must be multiples of stride_time");
        }
        break;
    case ExperimentKind::feller_suite:
        if (replicas < 2) fail("feller-suite needs replicas >= 2");
        if (!(horizon > 0.0) || !multiple_of_dt(horizon)) fail("feller-suite horizon must be a positive multiple of dt");
        if (!(feller_gap > 0.0) || !(feller_linear_gap > 0.0)) fail("feller gaps must be positive");
        break;
    case ExperimentKind::custom:
        break;
    }
}

std::string ExperimentConfig::canonical() const
{
    std::string s;
    for (const auto& b : bindings()) {
        s += b.key + " = " + b.get(*this) + "\n";
    }
    return s;
}

std::uint64_t ExperimentConfig::hash() const
{
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& b : bindings()) {
        if (b.key == "seed" || b.key == "threads" || b.key == "output_dir") continue;
        for (char ch : b.key + "=" + b.get(*this) + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::uint64_t ExperimentConfig::run_hash() const
{
    std::uint64_t h = hash();
    for (int i = 0; i < 8; ++i) {
        h ^= (params.seed >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
    return h;
}

std::string ExperimentConfig::hash_hex() const
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

Field ExperimentConfig::initial_field() const
{
    const Grid g = params.grid();
    switch (initial) {
    case InitialShape::zero: return Field(g);
    case InitialShape::soliton: return soliton(g, initial_speed, initial_center);
    case InitialShape::band_limited: {
        RandomStream rng(initial_seed, 0);
        return random_band_limited(g, initial_max_mode, initial_h1_norm, rng);
    }
    }
    return Field(g);
}

bool SuiteResult::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* SuiteResult::find(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

// ---------------------------------------------------------------- artifacts

namespace {

class Artifacts {
public:
    Artifacts(const ExperimentConfig& c, SuiteResult& r) : config_(c), result_(r)
    {
        std::filesystem::create_directories(c.output_dir);
    }

    bool tables() const { return config_.report_format == "csv"; }

    std::filesystem::path path(const std::string& name)
    {
        const auto p = config_.output_dir / name;
        result_.artifacts.push_back(p);
        return p;
    }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows)
    {
        if (!tables()) return;
        std::ofstream out(path(name), std::ios::trunc);
        out << "# config_hash=" << config_.hash_hex() << " seed=" << config_.params.seed << '\n';
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "") << header[i];
        }
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << format_double(row[i]);
            }
            out << '\n';
        }
        if (!out) {
            throw std::runtime_error("failed writing " + name);
        }
    }

private:
    const ExperimentConfig& config_;
    SuiteResult& result_;
};

CheckResult check_le(std::string name, double observed, double allowed, std::string detail = {})
{
    return {std::move(name), observed <= allowed, observed, allowed, std::move(detail)};
}

CheckResult from_report(const CheckReport& r)
{
    return {r.name, r.passed, -r.worst_margin, 0.0, r.detail};
}

// ---------------------------------------------------------------- suites

void conservation_suite(const ExperimentConfig& c, SuiteResult& out, Artifacts& art)
{
    const Field u0 = c.initial_field();
    const double T = c.params.t_end;
    const Field exact = soliton(u0.grid(), c.initial_speed, c.initial_center + c.initial_speed * T);
    const double l2_0 = l2_norm_sq(u0);
    const double I_0 = invariant_I(u0);
    struct Row {
        double dt, shape, l2, I;
    };
    std::vector<Row> rows;
    for (double dt : {c.params.dt, c.params.dt / 2.0}) {
        SimParams p = c.params;
        p.dt = dt;
        const TrajectoryRecord rec = integrate(p, make_initial_state(p, u0, 0), {});
        if (rec.status != TrajectoryStatus::ok) {
            throw InstabilityError("soliton run " + to_string(rec.status), 0, rec.failure_time, rec.status);
        }
        const Field& u = rec.final_state.u;
        rows.push_back({dt, std::sqrt(l2_norm_sq(u - exact) / l2_norm_sq(exact)),
                        std::abs(std::sqrt(l2_norm_sq(u) / l2_0) - 1.0), std::abs(invariant_I(u) / I_0 - 1.0)});
    }
    std::vector<std::vector<double>> table;
    for (const auto& r : rows) table.push_back({r.dt, r.shape, r.l2, r.I});
    art.csv("soliton_errors.csv", {"dt", "shape_rel_error", "l2_rel_drift", "I_rel_drift"}, table);

    out.checks.push_back(check_le("l2-drift", rows[0].l2, 1e-8));
    out.checks.push_back(check_le("I-drift", rows[0].I, 1e-6));
    out.checks.push_back(check_le("shape-error", rows[0].shape, 1e-6));
    const double ratio = rows[0].shape / rows[1].shape;
    out.checks.push_back(check_le("dt-halving-order", std::abs(ratio - 4.0), 0.5,
                                  "error ratio " + format_double(ratio) + " for dt -> dt/2"));
}

void linear_exact_suite(const ExperimentConfig& c, SuiteResult& out, Artifacts& art)
{
    const Field u0 = c.initial_field();
    const SimParams& p = c.params;
    const TrajectoryRecord rec = integrate(p, make_initial_state(p, u0, 0), {});
    const double T = rec.final_state.t;
    const Field exact = apply_linear_semigroup(u0, T, p.lambda);
    const auto got = rec.final_state.u.coefficients();
    const auto want = exact.coefficients();
    std::vector<std::vector<double>> table;
    double worst_mode = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        const double err = std::abs(got[k] - want[k]);
        if (std::abs(want[k]) > 0.0) {
            worst_mode = std::max(worst_mode, err / std::abs(want[k]));
        }
        table.push_back({static_cast<double>(k), want[k].real(), want[k].imag(), got[k].real(), got[k].imag(), err});
    }
    art.csv("linear_modes.csv", {"k", "exact_re", "exact_im", "got_re", "got_im", "abs_error"}, table);
    const double rel = std::sqrt(l2_norm_sq(rec.final_state.u - exact) / l2_norm_sq(exact));
    out.checks.push_back(check_le("linear-relative-error", rel, 1e-10,
                                  std::to_string(p.step_count()) + " steps; worst single-mode relative error " +
                                      format_double(worst_mode)));
}

bool is_linear_stochastic(const SimParams& p)
{
    return !p.nonlinear && p.forcing.shape == ForcingShape::zero;
}

std::vector<std::vector<double>> moment_table(const MomentSeries& s)
{
    std::vector<std::vector<Estimate>> tracks;
    for (Moment m : all_moments()) tracks.push_back(s.track(m));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        std::vector<double> row{s.times[i]};
        for (const auto& t : tracks) {
            row.push_back(t[i].mean);
            row.push_back(t[i].se);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> moment_header()
{
    std::vector<std::string> h{"t"};
    for (Moment m : all_moments()) {
        h.push_back(to_string(m) + "_mean");
        h.push_back(to_string(m) + "_se");
    }
    return h;
}

// Worst (|value| - allowed) over time of an Estimate series against
// 4 SE plus a per-time bias allowance.
CheckResult residual_check(const std::string& name, const std::vector<Estimate>& r, const std::vector<double>& bias,
                           const std::vector<double>& times)
{
    bool ok = true;
    double worst_ratio = -1.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double tol = 4.0 * r[i].se + bias[i];
        ok = ok && std::abs(r[i].mean) <= tol;
        const double ratio = tol > 0.0 ? std::abs(r[i].mean) / tol : (r[i].mean == 0.0 ? 0.0 : HUGE_VAL);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            at = i;
        }
    }
    std::ostringstream d;
    d << "tightest at t=" << times[at] << ": residual " << r[at].mean << ", se " << r[at].se << ", dt-bias "
      << bias[at];
    return {name, ok, std::abs(r[at].mean), 4.0 * r[at].se + bias[at], d.str()};
}

// A check passes if it passes at dt or at dt/2.
CheckResult adjudicate(CheckResult coarse, const std::optional<CheckResult>& fine)
{
    if (!fine) return coarse;
    CheckResult out = coarse;
    out.passed = coarse.passed || fine->passed;
    out.detail = "dt: " + std::string(coarse.passed ? "pass" : "FAIL") + " (" + coarse.detail + "); dt/2: " +
                 (fine->passed ? "pass" : "FAIL") + " (" + fine->detail + ")";
    return out;
}

void moment_suite(const ExperimentConfig& c, SuiteResult& out, Artifacts& art)
{
    const SimParams& p = c.params;
    EnsembleOptions opt;
    opt.observe_every = c.observe_every;
    opt.threads = c.threads;
    const Field u0 = c.initial_field();
    if (c.initial != InitialShape::zero) {
        opt.initial = [u0](std::size_t) { return u0; };
    }
    const MomentSeries coarse = run_ensemble(p, c.trajectories, opt);
    std::optional<MomentSeries> fine;
    if (c.refine) {
        SimParams q = p;
        q.dt = p.dt / 2.0;
        EnsembleOptions o2 = opt;
        o2.observe_every = 2 * c.observe_every;
        fine = run_ensemble(q, c.trajectories, o2);
    }
    art.csv("moments.csv", moment_header(), moment_table(coarse));
    if (fine) art.csv("moments_dt_half.csv", moment_header(), moment_table(*fine));

    const std::size_t n = coarse.times.size();
    const Grid grid = p.grid();
    const NoiseOperator phi = p.noise.build(grid);
    const Field f = build_forcing(p.forcing, grid);

    // Energy balance with the measured dt-bias.
    const auto r1 = energy_balance_residual(coarse);
    std::vector<Estimate> r2;
    std::vector<double> bias(n, 0.0);
    if (fine) {
        r2 = energy_balance_residual(*fine);
        for (std::size_t i = 0; i < n; ++i) bias[i] = std::abs(r1[i].mean - r2[i].mean);
    }
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < n; ++i) {
            rows.push_back({coarse.times[i], r1[i].mean, r1[i].se, fine ? r2[i].mean : 0.0, fine ? r2[i].se : 0.0,
                            bias[i]});
        }
        art.csv("energy_balance.csv", {"t", "residual", "se", "residual_dt_half", "se_dt_half", "dt_bias"}, rows);
    }
    out.checks.push_back(adjudicate(residual_check("energy-balance", r1, bias, coarse.times),
                                    fine ? std::optional(residual_check("energy-balance", r2, bias, fine->times))
                                         : std::nullopt));

    const auto both = [&](const std::function<CheckResult(const MomentSeries&)>& fn) {
        return adjudicate(fn(coarse), fine ? std::optional(fn(*fine)) : std::nullopt);
    };
    for (int k = 1; k <= 3; ++k) {
        out.checks.push_back(both([k](const MomentSeries& s) { return from_report(moment_bound_check(s, k)); }));
    }

    std::vector<FunctionalSample> snapshots;
    for (const MomentSeries* s : std::initializer_list<const MomentSeries*>{&coarse, fine ? &*fine : nullptr}) {
        if (!s) continue;
        for (const auto& path : s->paths) snapshots.insert(snapshots.end(), path.begin(), path.end());
    }

    if (is_linear_stochastic(p)) {
        const double target = coarse.phi_hs_sq / (2.0 * p.lambda);
        const Estimate last = coarse.at(Moment::l2_sq, n - 1);
        out.checks.push_back(check_le("stationary-level", std::abs(last.mean - target), 3.0 * last.se,
                                      "E||u||^2=" + format_double(last.mean) + " target " + format_double(target)));
        const double env = energy_envelope(coarse.times.back() - coarse.times.front(), coarse.track(Moment::l2_sq)[0].mean,
                                           p.lambda, coarse.phi_hs_sq, coarse.f_l2_sq);
        const double slack = env / last.mean;
        const double slack_se = env * last.se / (last.mean * last.mean);
        out.checks.push_back(check_le("envelope-slack", slack, 2.0 + 3.0 * slack_se,
                                      "envelope " + format_double(env) + " over E||u||^2 " + format_double(last.mean)));
    } else {
        // Constants fitted on random fields, then applied to every snapshot.
        const auto fields = random_field_ensemble(grid, c.sandwich_fields, c.constants_seed, c.constants_max_h1);
        const double c_sandwich = fit_sandwich_constant(fields);
        std::vector<Field> alpha_set(fields.begin(), fields.begin() + std::min(c.alpha_fields, fields.size()));
        const double c_alpha = fit_alpha_constant(alpha_set, f, phi, p.lambda);

        out.checks.push_back(both([c_sandwich](const MomentSeries& s) { return from_report(h1_bound_check(s, c_sandwich)); }));

        double worst_sandwich = -std::numeric_limits<double>::infinity();
        double worst_alpha = -std::numeric_limits<double>::infinity();
        for (const auto& s : snapshots) {
            const double l10 = std::pow(s.l2_sq, 5.0 / 3.0);
            const double lower = 2.0 / 3.0 * s.dx_l2_sq - c_sandwich * l10 - s.I;
            const double upper = s.I - 4.0 / 3.0 * s.dx_l2_sq - c_sandwich * l10;
            worst_sandwich = std::max({worst_sandwich, lower, upper});
            const double ratio = (std::abs(s.alpha) - p.lambda * s.dx_l2_sq) / (s.l2_sq * s.l2_sq + 1.0);
            worst_alpha = std::max(worst_alpha, ratio);
        }
        out.checks.push_back(check_le("sandwich-snapshots", worst_sandwich, 0.0,
                                      "C*=" + format_double(c_sandwich) + " fitted on " +
                                          std::to_string(fields.size()) + " fields; " +
                                          std::to_string(snapshots.size()) + " snapshots"));
        out.checks.push_back(check_le("alpha-snapshots", worst_alpha, c_alpha,
                                      "C_alpha=" + format_double(c_alpha) + " fitted on " +
                                          std::to_string(alpha_set.size()) + " fields"));
        art.csv("constants.csv", {"sandwich_C", "alpha_C", "worst_snapshot_alpha_ratio"},
                {{c_sandwich, c_alpha, worst_alpha}});
    }

    // Discounted energy identity over a window in the stationary segment.
    const Estimate id1 = energy_identity_residual(coarse, c.identity_window, c.identity_from);
    std::optional<CheckResult> id_fine;
    double id_bias = 0.0;
    if (fine) {
        const Estimate id2 = energy_identity_residual(*fine, c.identity_window, c.identity_from);
        id_bias = std::abs(id1.mean - id2.mean);
        id_fine = check_le("energy-identity", std::abs(id2.mean), 4.0 * id2.se + id_bias,
                           "residual " + format_double(id2.mean) + " se " + format_double(id2.se));
    }
    out.checks.push_back(adjudicate(check_le("energy-identity", std::abs(id1.mean), 4.0 * id1.se + id_bias,
                                             "residual " + format_double(id1.mean) + " se " + format_double(id1.se)),
                                    id_fine));
    {
        // Analytically zero case: f = 0 linear OU law held at its stationary level.
        const double v = coarse.phi_hs_sq / (2.0 * p.lambda);
        const std::vector<double> t{0.0, c.identity_window};
        const std::vector<double> l2{v, v};
        const std::vector<double> uf{0.0, 0.0};
        const double r = energy_identity_residual(t, l2, uf, 0, c.identity_window, p.lambda, coarse.phi_hs_sq);
        out.checks.push_back(check_le("energy-identity-analytic", std::abs(r), 1e-8));
    }
    if (coarse.aborted > 0) {
        out.checks.push_back({"aborted-trajectories", true, static_cast<double>(coarse.aborted), 0.0,
                              "within the tolerated fraction"});
    }
}

std::vector<double> kb_tail_oracle(const EmpiricalMeasure& mu, const NoiseOperator& phi, double lambda,
                                   std::size_t cutoff)
{
    const Grid& g = mu.grid;
    const auto a = phi.amplitudes();
    double tail_var = 0.0;
    for (std::size_t k = cutoff; k < a.size(); ++k) tail_var += g.multiplicity(k) * std::norm(a[k]);
    tail_var /= 2.0 * lambda;
    std::vector<double> w;
    for (const auto& s : mu.snapshots) w.push_back(tail_var * (-std::expm1(-2.0 * lambda * s.t)));
    return w;
}

void kb_suite(const ExperimentConfig& c, SuiteResult& out, Artifacts& art)
{
    const SimParams& p = c.params;
    const bool need_coefficients = !c.tail_cutoffs.empty() || !c.increment_lags.empty() || c.persist_measure;
    KbOptions o;
    o.replicas = c.replicas;
    o.burn_in = c.burn_in;
    o.keep_coefficients = need_coefficients;
    o.threads = c.threads;
    o.params_hash = c.hash();
    const double full = c.kb_distances ? 2.0 * c.horizon : c.horizon;
    const EmpiricalMeasure mu = kb_average(p, full, c.stride, o);
    if (c.persist_measure) {
        write_measure(c.output_dir / "measure", mu);
        art.path("measure/manifest.json");
    }
    const bool linear = is_linear_stochastic(p);
    const NoiseOperator phi = p.noise.build(mu.grid);

    if (!c.tail_cutoffs.empty()) {
        std::vector<std::size_t> cut = c.tail_cutoffs;
        std::sort(cut.begin(), cut.end());
        std::vector<std::vector<double>> rows;
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        double worst_oracle = -std::numeric_limits<double>::infinity();
        std::string oracle_detail;
        for (std::size_t N : cut) {
            const Estimate e = tail_mass(mu, N);
            monotone = monotone && e.mean <= prev;
            prev = e.mean;
            double oracle = 0.0;
            if (linear) {
                const auto w = kb_tail_oracle(mu, phi, p.lambda, N);
                oracle = compensated_sum(w) / static_cast<double>(w.size());
                const double excess = std::abs(e.mean - oracle) - 4.0 * e.se;
                if (excess > worst_oracle) {
                    worst_oracle = excess;
                    oracle_detail = "N=" + std::to_string(N) + ": " + format_double(e.mean) + " vs " +
                                    format_double(oracle) + " se " + format_double(e.se);
                }
            }
            rows.push_back({static_cast<double>(N), e.mean, e.se, oracle});
        }
        art.csv("tail_mass.csv", {"cutoff", "mean", "se", "oracle"}, rows);
        out.checks.push_back({"tail-monotone", monotone, 0.0, 0.0, std::to_string(cut.size()) + " cutoffs"});
        if (linear) {
            out.checks.push_back(check_le("tail-oracle", worst_oracle, 0.0, oracle_detail));
        }
    }

    if (!c.increment_lags.empty()) {
        std::vector<double> lags = c.increment_lags;
        std::sort(lags.begin(), lags.end(), std::greater<>());
        std::vector<std::vector<double>> rows;
        bool decreasing = true;
        double prev = std::numeric_limits<double>::infinity();
        double worst_oracle = -std::numeric_limits<double>::infinity();
        std::string detail;
        const auto a = phi.amplitudes();
        const auto& xi = mu.grid.half_wavenumbers();
        for (double d : lags) {
            const Estimate e = increment_moment(mu, d, c.burn_in);
            decreasing = decreasing && e.mean < prev;
            prev = e.mean;
            double oracle = 0.0;
            if (linear) {
                for (std::size_t k = 0; k < a.size(); ++k) {
                    const double v = std::norm(a[k]) / (2.0 * p.lambda);
                    const double x3 = xi[k] * xi[k] * xi[k];
                    oracle += mu.grid.multiplicity(k) * 2.0 * v * (1.0 - std::exp(-p.lambda * d) * std::cos(x3 * d));
                }
                const double excess = std::abs(e.mean - oracle) - 4.0 * e.se;
                if (excess > worst_oracle) {
                    worst_oracle = excess;
                    detail = "d=" + format_double(d) + ": " + format_double(e.mean) + " vs " + format_double(oracle) +
                             " se " + format_double(e.se);
                }
            }
            rows.push_back({d, e.mean, e.se, oracle});
        }
        art.csv("increments.csv", {"lag", "mean", "se", "oracle"}, rows);
        out.checks.push_back({"increment-decreasing", decreasing, 0.0, 0.0, std::to_string(lags.size()) + " lags"});
        if (linear) {
            out.checks.push_back(check_le("increment-oracle", worst_oracle, 0.0, detail));
        }
    }

    if (c.kb_distances) {
        const std::vector<double> ns{c.horizon / 4.0, c.horizon / 2.0, c.horizon};
        const auto scales = pooled_scales(mu, mu);
        std::vector<Estimate> d;
        std::vector<std::vector<double>> rows;
        for (double n : ns) {
            d.push_back(measure_distance(mu.truncated(n), mu.truncated(2.0 * n), scales));
            rows.push_back({n, d.back().mean, d.back().se});
        }
        art.csv("kb_distance.csv", {"n", "distance", "se"}, rows);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            worst = std::max(worst, d[i + 1].mean - d[i].mean - 3.0 * std::hypot(d[i].se, d[i + 1].se));
        }
        std::ostringstream det;
        for (std::size_t i = 0; i < d.size(); ++i) det << "n=" << ns[i] << ": " << d[i].mean << " +- " << d[i].se << "; ";
        out.checks.push_back(check_le("kb-distance-nonincreasing", worst, 0.0, det.str()));
    }
}

void feller_suite(const ExperimentConfig& c, SuiteResult& out, Artifacts& art)
{
    const SimParams& p = c.params;
    const Grid g = p.grid();
    const Field u0 = c.initial_field();
    RandomStream rng(c.initial_seed, 1);
    const Field direction = random_band_limited(g, c.initial_max_mode, 1.0, rng);
    FellerOptions o;
    o.observe_every = c.observe_every;
    o.threads = c.threads;

    const FellerProbeResult zero = feller_probe(u0, u0, p, c.horizon, c.replicas, o);
    double max_zero = 0.0;
    for (const auto& d : zero.divergence) max_zero = std::max(max_zero, *std::max_element(d.begin(), d.end()));
    out.checks.push_back(check_le("zero-gap", max_zero, 0.0));

    SimParams lin = p;
    lin.nonlinear = false;
    const Field v_lin = u0 + direction * c.feller_linear_gap;
    const FellerProbeResult linear = feller_probe(u0, v_lin, lin, c.horizon, c.replicas, o);
    const double gap_l2 = std::sqrt(l2_norm_sq(u0 - v_lin));
    double worst_lin = 0.0;
    for (const auto& series : linear.l2_gap) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double want = std::exp(-p.lambda * linear.times[i]) * gap_l2;
            worst_lin = std::max(worst_lin, std::abs(series[i] - want) / want);
        }
    }
    out.checks.push_back(check_le("linear-contraction", worst_lin, 1e-10));

    const FellerProbeResult full = feller_probe(u0, u0 + direction * c.feller_gap, p, c.horizon, c.replicas, o);
    const FellerProbeResult half = feller_probe(u0, u0 + direction * (0.5 * c.feller_gap), p, c.horizon, c.replicas, o);
    const double ratio = full.final_median_gap() / half.final_median_gap();
    out.checks.push_back(check_le("gap-halving", std::abs(ratio / 2.0 - 1.0), 0.2,
                                  "median ||u_T - v_T||_H1 ratio " + format_double(ratio) + "; fitted growth rate " +
                                      format_double(full.growth_rate) + ", G(T)=" +
                                      format_double(full.growth_constant) + ", within " +
                                      format_double(full.fraction_within)));

    std::vector<std::vector<double>> rows;
    const auto med = [](const FellerProbeResult& r, std::size_t i) {
        std::vector<double> col;
        for (const auto& d : r.divergence) col.push_back(d[i]);
        return median(std::move(col));
    };
    for (std::size_t i = 0; i < full.times.size(); ++i) {
        rows.push_back({full.times[i], med(zero, i), med(linear, i), med(full, i), med(half, i)});
    }
    art.csv("feller.csv", {"t", "median_sup_zero_gap", "median_sup_linear", "median_sup_gap", "median_sup_half_gap"},
            rows);
    art.csv("feller_fit.csv", {"gap", "growth_rate", "growth_constant", "fraction_within"},
            {{full.initial_gap, full.growth_rate, full.growth_constant, full.fraction_within},
             {half.initial_gap, half.growth_rate, half.growth_constant, half.fraction_within}});
}

// Single trajectory with functional rows and checkpoints; shared by run and resume.
void custom_run(const ExperimentConfig& c, TrajectoryState initial, std::uint64_t stream, SuiteResult& out,
                Artifacts& art)
{
    const SimParams& p = c.params;
    Stepper stepper(p);
    const FunctionalEvaluator evaluate(stepper.forcing(), stepper.noise(), p.lambda);
    std::vector<std::vector<double>> rows;
    const std::vector<Observer> observers{[&](const TrajectoryState& s) {
        auto row = to_row(evaluate(s.t, s.u));
        row.insert(row.begin(), static_cast<double>(s.step));
        rows.push_back(row);
        return std::vector<double>{};
    }};
    IntegrateOptions io;
    io.observe_every = c.observe_every;
    const std::uint64_t hash = c.run_hash();
    io.on_checkpoint = [&](const TrajectoryState& s) {
        write_checkpoint(c.output_dir / ("checkpoint_" + std::to_string(s.step) + ".bin"), s, stream, hash);
    };
    const TrajectoryRecord rec = integrate(stepper, std::move(initial), observers, io);
    std::vector<std::string> header{"step"};
    for (const auto& col : functional_sample_columns()) header.push_back(col);
    art.csv("trajectory.csv", header, rows);
    if (rec.status != TrajectoryStatus::ok) {
        throw InstabilityError("trajectory " + to_string(rec.status) + " (" + rec.final_state.diagnosis + ")", 0,
                               rec.failure_time, rec.status);
    }
    write_checkpoint(art.path("final_state.bin"), rec.final_state, stream, hash);
    out.checks.push_back({"completed", true, rec.final_state.t, p.t_end, std::to_string(rows.size()) + " samples"});
}

}  // namespace

SuiteResult run_suite(const ExperimentConfig& config)
{
    config.validate();
    SuiteResult out;
    out.kind = config.kind;
    Artifacts art(config, out);
    switch (config.kind) {
    case ExperimentKind::conservation: conservation_suite(config, out, art); break;
    case ExperimentKind::linear_exact: linear_exact_suite(config, out, art); break;
    case ExperimentKind::moment_suite: moment_suite(config, out, art); break;
    case ExperimentKind::kb_suite: kb_suite(config, out, art); break;
    case ExperimentKind::feller_suite: feller_suite(config, out, art); break;
    case ExperimentKind::custom:
        custom_run(config, make_initial_state(config.params, config.initial_field(), 0), 0, out, art);
        break;
    }
    return out;
}

SuiteResult resume_suite(const std::filesystem::path& checkpoint, const ExperimentConfig& config)
{
    config.validate();
    if (config.kind != ExperimentKind::custom) {
        throw ConfigError("resume is available for kind = custom");
    }
    std::optional<Checkpoint> loaded;
    try {
        loaded = read_checkpoint(checkpoint);
        require_checkpoint_grid(*loaded, config.params.grid());
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    Checkpoint& ckpt = *loaded;
    if (ckpt.config_hash != config.run_hash()) {
        throw ConfigError("checkpoint was written under a different config or seed");
    }
    if (ckpt.state.step > config.params.step_count()) {
        throw ConfigError("checkpoint lies beyond t_end_time");
    }
    SuiteResult out;
    out.kind = config.kind;
    Artifacts art(config, out);
    custom_run(config, std::move(ckpt.state), ckpt.stream_index, out, art);
    return out;
}

// ---------------------------------------------------------------- commands

namespace {

class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".skdv.lock")
    {
        std::filesystem::create_directories(dir);
        std::FILE* f = std::fopen(path_.c_str(), "wx");
        if (!f) {
            throw ConfigError("output directory " + dir.string() + " is locked by another run (" + path_.string() +
                              ")");
        }
        std::fprintf(f, "%ld\n", static_cast<long>(::getpid()));
        std::fclose(f);
    }
    ~DirectoryLock()
    {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

void write_summary(const ExperimentConfig& c, const SuiteResult* r, int status, const std::string& error)
{
    nlohmann::json j;
    j["kind"] = to_string(c.kind);
    j["config_hash"] = c.hash_hex();
    j["seed"] = c.params.seed;
    j["status"] = status;
    j["passed"] = status == exit_pass;
    if (!error.empty()) j["error"] = error;
    j["checks"] = nlohmann::json::array();
    j["artifacts"] = nlohmann::json::array();
    if (r) {
        for (const auto& ch : r->checks) {
            j["checks"].push_back({{"name", ch.name},
                                   {"passed", ch.passed},
                                   {"observed", ch.observed},
                                   {"allowed", ch.allowed},
                                   {"detail", ch.detail}});
        }
        for (const auto& a : r->artifacts) j["artifacts"].push_back(a.filename().string());
    }
    j["config"] = c.canonical();
    std::ofstream out(c.output_dir / "summary.json", std::ios::trunc);
    out << j.dump(2) << '\n';
}

int execute(const std::function<ExperimentConfig()>& load, const std::function<SuiteResult(const ExperimentConfig&)>& run,
            const CommandOverrides& ov)
{
    ExperimentConfig config;
    try {
        config = load();
        if (ov.seed) config.params.seed = *ov.seed;
        if (ov.threads) config.threads = *ov.threads;
        if (ov.output_dir) config.output_dir = *ov.output_dir;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "config invalid: " << e.what() << '\n';
        return exit_config_invalid;
    }
    std::optional<DirectoryLock> lock;
    try {
        lock.emplace(config.output_dir);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return exit_config_invalid;
    }
    try {
        const SuiteResult r = run(config);
        const int status = r.passed() ? exit_pass : exit_check_failed;
        for (const auto& ch : r.checks) {
            std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  observed=" << format_double(ch.observed)
                      << " allowed=" << format_double(ch.allowed);
            if (!ch.detail.empty()) std::cout << "  " << ch.detail;
            std::cout << '\n';
        }
        write_summary(config, &r, status, "");
        return status;
    } catch (const ConfigError& e) {
        std::cerr << "config invalid: " << e.what() << '\n';
        write_summary(config, nullptr, exit_config_invalid, e.what());
        return exit_config_invalid;
    } catch (const InstabilityError& e) {
        std::cerr << "instability: " << e.what() << '\n';
        write_summary(config, nullptr, exit_instability, e.what());
        return exit_instability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        write_summary(config, nullptr, exit_config_invalid, e.what());
        return exit_config_invalid;
    }
}

}  // namespace

int run_command(const std::filesystem::path& config_path, const CommandOverrides& overrides)
{
    return execute([&] { return ExperimentConfig::load(config_path); }, run_suite, overrides);
}

int resume_command(const std::filesystem::path& checkpoint, const std::filesystem::path& config_path,
                   const CommandOverrides& overrides)
{
    return execute([&] { return ExperimentConfig::load(config_path); },
                   [&](const ExperimentConfig& c) { return resume_suite(checkpoint, c); }, overrides);
}

}  // namespace skdv
