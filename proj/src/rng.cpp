#include "skdv/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace skdv {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32),
                      0x6b64763fu};
    engine_.seed(seq);
}

double RandomStream::uniform()
{
    // 53 random bits mapped to (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

std::pair<double, double> RandomStream::normal_pair()
{
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
}

double RandomStream::normal()
{
    return normal_pair().first;
}

std::string RandomStream::serialize() const
{
    std::ostringstream os;
    os << engine_;
    return os.str();
}

RandomStream RandomStream::deserialize(const std::string& text)
{
    RandomStream s;
    std::istringstream is(text);
    is >> s.engine_;
    if (is.fail()) {
        throw std::runtime_error("corrupt random stream state");
    }
    return s;
}

}  // namespace skdv
