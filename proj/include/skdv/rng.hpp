#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace skdv {

/// Independent Gaussian stream for one trajectory.
///
/// The stream is fully determined by (master_seed, stream_index), so an
/// ensemble is reproducible whatever order its trajectories run in. The whole
/// state lives in the engine; normals come from Box-Muller without a cached
/// spare, which keeps checkpointed state exact.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

    /// Uniform on (0, 1].
    double uniform();
    /// Two independent standard normals.
    std::pair<double, double> normal_pair();
    /// One standard normal (consumes one Box-Muller pair).
    double normal();

    std::string serialize() const;
    static RandomStream deserialize(const std::string& text);

    bool operator==(const RandomStream& other) const { return engine_ == other.engine_; }

private:
    RandomStream() = default;
    std::mt19937_64 engine_;
};

}  // namespace skdv
