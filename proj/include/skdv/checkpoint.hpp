#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "skdv/integrator.hpp"

namespace skdv {

/// Binary checkpoint, all integers and doubles little-endian:
///
///   magic "SKDVCKPT" | u32 version | u64 modes | f64 length | f64 t |
///   u64 step | u64 stream_index | u64 config_hash | u32 rng_len | rng_len bytes
///   of engine state text | (modes/2 + 1) x (f64 re, f64 im) coefficients
struct Checkpoint {
    static constexpr std::uint32_t version = 1;

    std::uint64_t stream_index = 0;
    std::uint64_t config_hash = 0;
    TrajectoryState state;
};

void write_checkpoint(const std::filesystem::path& path, const TrajectoryState& state, std::uint64_t stream_index,
                      std::uint64_t config_hash);

/// Throws std::runtime_error on a bad magic, version mismatch or truncation.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Throws std::runtime_error unless the checkpoint grid matches `grid`.
void require_checkpoint_grid(const Checkpoint& ckpt, const Grid& grid);

}  // namespace skdv
