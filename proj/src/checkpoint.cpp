#include "skdv/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace skdv {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'K', 'D', 'V', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ofstream& os, T value)
{
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& is)
{
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) {
        throw std::runtime_error("truncated checkpoint");
    }
    return value;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const TrajectoryState& state, std::uint64_t stream_index,
                      std::uint64_t config_hash)
{
    const Grid& g = state.u.grid();
    const std::vector<Complex> c = state.u.coefficients();
    const std::string rng = state.rng.serialize();

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw std::runtime_error("cannot open checkpoint for writing: " + tmp.string());
        }
        os.write(kMagic, sizeof(kMagic));
        put<std::uint32_t>(os, Checkpoint::version);
        put<std::uint64_t>(os, g.modes());
        put<double>(os, g.length());
        put<double>(os, state.t);
        put<std::uint64_t>(os, state.step);
        put<std::uint64_t>(os, stream_index);
        put<std::uint64_t>(os, config_hash);
        put<std::uint32_t>(os, static_cast<std::uint32_t>(rng.size()));
        os.write(rng.data(), static_cast<std::streamsize>(rng.size()));
        for (const auto& z : c) {
            put<double>(os, z.real());
            put<double>(os, z.imag());
        }
        if (!os) {
            throw std::runtime_error("failed writing checkpoint: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("not a checkpoint file: " + path.string());
    }
    const auto version = get<std::uint32_t>(is);
    if (version != Checkpoint::version) {
        throw std::runtime_error("checkpoint version " + std::to_string(version) + " unsupported (expected " +
                                 std::to_string(Checkpoint::version) + ")");
    }
    const auto modes = get<std::uint64_t>(is);
    const auto length = get<double>(is);
    const auto t = get<double>(is);
    const auto step = get<std::uint64_t>(is);
    const auto stream_index = get<std::uint64_t>(is);
    const auto config_hash = get<std::uint64_t>(is);
    const auto rng_len = get<std::uint32_t>(is);
    std::string rng(rng_len, '\0');
    is.read(rng.data(), rng_len);
    if (!is) {
        throw std::runtime_error("truncated checkpoint");
    }
    const Grid grid(length, static_cast<std::size_t>(modes));
    std::vector<Complex> c(grid.spectral_size());
    for (auto& z : c) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        z = Complex(re, im);
    }
    return Checkpoint{stream_index, config_hash,
                      TrajectoryState{t, step, Field::from_spectral(grid, std::move(c)), RandomStream::deserialize(rng),
                                      TrajectoryStatus::ok, {}}};
}

void require_checkpoint_grid(const Checkpoint& ckpt, const Grid& grid)
{
    if (!(ckpt.state.u.grid() == grid)) {
        throw std::runtime_error("checkpoint grid does not match configuration");
    }
}

}  // namespace skdv
