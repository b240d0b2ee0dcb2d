#include "fbh/random_field.hpp"

#include <cmath>
#include <random>

#include "fbh/kernels.hpp"

namespace fbh {

Field random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                          double amplitude, double cutoff_frac) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Field noise(grid);
    for (double& v : noise.mutable_values()) v = normal(rng);

    const double sigma = cutoff_frac * grid->nyquist();
    const auto& spec = noise.spectrum();
    std::vector<std::complex<double>> filtered(spec.size());
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double xi2 = grid->xi_squared(j);
        filtered[j] = spec[j] * std::exp(-xi2 / (2.0 * sigma * sigma));
    }
    Field out = field_from_spectrum(grid, filtered, 1e-8);
    const double sup = kernels::lp_norm(out, kernels::kInfinity);
    if (sup > 0.0) out *= amplitude / sup;
    return out;
}

Field gaussian_bump(const GridPtr& grid, double amplitude, double width) {
    Field f(grid);
    auto& v = f.mutable_values();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto idx = grid->unflatten(i);
        double r2 = 0.0;
        for (int d = 0; d < grid->dim(); ++d) {
            const double x = grid->coord(idx[d]);
            r2 += x * x;
        }
        v[i] = amplitude * std::exp(-r2 / (2.0 * width * width));
    }
    return f;
}

Field box_indicator(const GridPtr& grid, double amplitude, double extent) {
    Field f(grid);
    auto& v = f.mutable_values();
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto idx = grid->unflatten(i);
        bool inside = true;
        for (int d = 0; d < grid->dim(); ++d)
            if (std::abs(grid->coord(idx[d])) > extent) inside = false;
        v[i] = inside ? amplitude : 0.0;
    }
    return f;
}

Field cosine_mode(const GridPtr& grid, int k0, int k1, int k2) {
    Field f(grid);
    auto& v = f.mutable_values();
    const int k[3] = {k0, k1, k2};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const auto idx = grid->unflatten(i);
        double phase = 0.0;
        for (int d = 0; d < grid->dim(); ++d)
            phase += 3.14159265358979323846 * k[d] *
                     grid->coord(idx[d]) / grid->half_length();
        v[i] = std::cos(phase);
    }
    return f;
}

}  // namespace fbh
