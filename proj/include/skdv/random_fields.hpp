#pragma once

#include <cstdint>
#include <vector>

#include "skdv/field.hpp"
#include "skdv/rng.hpp"

namespace skdv {

/// Random real field with independent Gaussian modes 1..max_mode (and the
/// zero mode unless zero_mean), rescaled to ||u||_H1 = h1_norm.
Field random_band_limited(const Grid& grid, std::size_t max_mode, double h1_norm, RandomStream& rng,
                          bool zero_mean = true);

/// Sum of 1-3 Gaussian bumps of random sign, width and position, rescaled to
/// ||u||_H1 = h1_norm. Widths are kept resolvable on the grid.
Field random_bumps(const Grid& grid, double h1_norm, RandomStream& rng);

/// Deterministic test ensemble: band-limited fields and bump fields in equal
/// parts, H1 norms log-uniform in [1e-2, max_h1].
std::vector<Field> random_field_ensemble(const Grid& grid, std::size_t count, std::uint64_t seed, double max_h1);

/// Soliton of u_t + u u_x + u_xxx = 0: 3c sech^2(sqrt(c)(x - x0)/2), moving
/// right with speed c. The profile is wrapped periodically.
Field soliton(const Grid& grid, double speed, double center);

}  // namespace skdv
