#pragma once

#include <cstdint>

#include "fbh/grid.hpp"

namespace fbh {

/// Smooth random field: white noise low-passed by a Gaussian spectral
/// window with cutoff at `cutoff_frac` of the Nyquist wavenumber, then
/// rescaled to sup-norm `amplitude`. Deterministic in (grid, seed).
Field random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                          double amplitude = 1.0, double cutoff_frac = 0.25);

/// Centered Gaussian bump  amplitude * exp(-|x|^2 / (2 width^2)).
Field gaussian_bump(const GridPtr& grid, double amplitude, double width);

/// Indicator of the centered box {|x_d| <= extent} scaled by `amplitude`.
Field box_indicator(const GridPtr& grid, double amplitude, double extent);

/// Single Fourier mode  cos(<xi_k, x>)  for integer frequency vector k.
Field cosine_mode(const GridPtr& grid, int k0, int k1 = 0, int k2 = 0);

}  // namespace fbh
