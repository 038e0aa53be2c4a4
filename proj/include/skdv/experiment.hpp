#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skdv/integrator.hpp"

namespace skdv {

enum class ExperimentKind { conservation, linear_exact, moment_suite, kb_suite, feller_suite, custom };
ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

enum class InitialShape { zero, soliton, band_limited };

/// Any problem with a configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything one experiment needs. Text form is `key = value` per line with
/// `#` comments; keys carry their units and unknown keys are rejected.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::custom;
    SimParams params{};

    std::size_t observe_every = 10;
    std::size_t trajectories = 200;
    bool refine = true;

    InitialShape initial = InitialShape::zero;
    double initial_speed = 1.0;
    double initial_center = 0.0;
    double initial_h1_norm = 1.0;
    std::size_t initial_max_mode = 16;
    std::uint64_t initial_seed = 1;

    double horizon = 1000.0;
    double stride = 1.0;
    std::size_t replicas = 10;
    double burn_in = 0.0;
    std::vector<std::size_t> tail_cutoffs{4, 8, 16, 32, 64};
    std::vector<double> increment_lags{};
    bool kb_distances = true;
    bool persist_measure = false;

    std::size_t sandwich_fields = 1000;
    std::size_t alpha_fields = 100;
    double constants_max_h1 = 20.0;
    std::uint64_t constants_seed = 7;
    double identity_window = 10.0;
    double identity_from = 50.0;

    double feller_gap = 0.01;
    double feller_linear_gap = 1.0;

    unsigned threads = 0;
    std::filesystem::path output_dir = "out";
    /// "csv": CSV tables plus summary.json; "json": summary.json only.
    std::string report_format = "csv";

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);
    /// Range checks across all fields; throws ConfigError.
    void validate() const;
    /// Sorted `key = value` lines of every key, doubles at full precision.
    std::string canonical() const;
    /// FNV-1a of canonical() minus seed, threads and output_dir.
    std::uint64_t hash() const;
    std::string hash_hex() const;
    /// hash() combined with the master seed; stamped into checkpoints.
    std::uint64_t run_hash() const;
    /// Initial condition described by the initial_* keys.
    Field initial_field() const;
};

/// Names of the accepted configuration keys.
const std::vector<std::string>& config_keys();

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double allowed = 0.0;
    std::string detail;
};

struct SuiteResult {
    ExperimentKind kind = ExperimentKind::custom;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> artifacts;
    bool passed() const;
    const CheckResult* find(const std::string& name) const;
};

/// Runs the configured suite and writes its artifacts into output_dir.
/// Throws ConfigError, InstabilityError or std::runtime_error.
SuiteResult run_suite(const ExperimentConfig& config);

/// Continues a custom run from a checkpoint written under the same config.
SuiteResult resume_suite(const std::filesystem::path& checkpoint, const ExperimentConfig& config);

struct CommandOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::filesystem::path> output_dir;
};

/// Exit statuses of the command-line entry points.
enum ExitStatus : int { exit_pass = 0, exit_check_failed = 1, exit_config_invalid = 2, exit_instability = 3 };

/// Loads the config, takes the output-directory lock, runs and writes
/// summary.json. Returns an ExitStatus; messages go to stderr.
int run_command(const std::filesystem::path& config_path, const CommandOverrides& overrides = {});
int resume_command(const std::filesystem::path& checkpoint, const std::filesystem::path& config_path,
                   const CommandOverrides& overrides = {});

}  // namespace skdv
