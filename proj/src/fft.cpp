#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace skdv::fft {
namespace {

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.r2c);
            fftw_destroy_plan(p.c2r);
        }
    }

    const PlanPair& get(std::size_t n)
    {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) {
            return it->second;
        }
        double* re = fftw_alloc_real(n);
        fftw_complex* co = fftw_alloc_complex(n / 2 + 1);
        const unsigned flags = FFTW_ESTIMATE;
        PlanPair p;
        p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), re, co, flags);
        p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), co, re, flags);
        fftw_free(re);
        fftw_free(co);
        if (p.r2c == nullptr || p.c2r == nullptr) {
            throw std::runtime_error("FFTW planning failed");
        }
        return plans_.emplace(n, p).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

// Plans were made on fftw_malloc'd arrays; executing them on other memory is
// only valid at the same alignment, so transforms run through these buffers.
struct AlignedScratch {
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* spectral = nullptr;

    ~AlignedScratch() { release(); }
    void release()
    {
        fftw_free(real);
        fftw_free(spectral);
        real = nullptr;
        spectral = nullptr;
    }
    void ensure(std::size_t size)
    {
        if (size == n) {
            return;
        }
        release();
        real = fftw_alloc_real(size);
        spectral = fftw_alloc_complex(size / 2 + 1);
        n = size;
    }
};

AlignedScratch& scratch(std::size_t n)
{
    thread_local AlignedScratch s;
    s.ensure(n);
    return s;
}

}  // namespace

void forward(const Grid& grid, std::span<const double> values, std::span<Complex> coefficients)
{
    const std::size_t n = grid.modes();
    if (values.size() != n || coefficients.size() != grid.spectral_size()) {
        throw std::invalid_argument("fft::forward size mismatch");
    }
    const auto& plan = cache().get(n);
    auto& buf = scratch(n);
    std::copy(values.begin(), values.end(), buf.real);
    fftw_execute_dft_r2c(plan.r2c, buf.real, buf.spectral);
    const double scale = std::sqrt(grid.length()) / static_cast<double>(n);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        coefficients[k] = Complex(buf.spectral[k][0] * scale, buf.spectral[k][1] * scale);
    }
}

void inverse(const Grid& grid, std::span<const Complex> coefficients, std::span<double> values)
{
    const std::size_t n = grid.modes();
    if (values.size() != n || coefficients.size() != grid.spectral_size()) {
        throw std::invalid_argument("fft::inverse size mismatch");
    }
    const auto& plan = cache().get(n);
    auto& buf = scratch(n);
    // c2r destroys its input, which here is the scratch copy.
    const double scale = 1.0 / std::sqrt(grid.length());
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        buf.spectral[k][0] = coefficients[k].real() * scale;
        buf.spectral[k][1] = coefficients[k].imag() * scale;
    }
    fftw_execute_dft_c2r(plan.c2r, buf.spectral, buf.real);
    std::copy(buf.real, buf.real + n, values.begin());
}

}  // namespace skdv::fft
