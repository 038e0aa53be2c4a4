#pragma once

// Internal FFTW wrapper. Plans are built once per mode count under a lock and
// executed through the new-array interface, which is thread-safe.

#include <span>

#include "skdv/field.hpp"

namespace skdv::fft {

/// Physical samples -> orthonormal half-spectrum coefficients.
void forward(const Grid& grid, std::span<const double> values, std::span<Complex> coefficients);

/// Orthonormal half-spectrum coefficients -> physical samples. The input is
/// not modified.
void inverse(const Grid& grid, std::span<const Complex> coefficients, std::span<double> values);

}  // namespace skdv::fft
