#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fbh {

/// Periodic box [-L, L]^N sampled with n points per axis.
///
/// Discrete transforms follow the density convention: the forward transform
/// approximates  F(xi) = int f(x) e^{-i<xi,x>} dx  (no 2*pi factor), the
/// inverse carries the full (2*pi)^{-N}. Wavenumbers are xi_k = pi k / L in
/// standard FFT ordering.
class Grid {
public:
    Grid(int dim, int points_per_axis, double half_length);

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double half_length() const { return half_length_; }
    std::size_t size() const { return size_; }

    double dx() const { return 2.0 * half_length_ / n_; }
    double cell_volume() const;
    double coord(int index_1d) const { return -half_length_ + index_1d * dx(); }
    /// Wavenumber for 1-d index j in FFT ordering (j <= n/2 positive branch).
    double wavenumber(int j) const { return wavenumbers_[j]; }
    int frequency(int j) const { return freq_[j]; }
    double nyquist() const { return 3.14159265358979323846 * (n_ / 2) / half_length_; }

    /// Decompose a flat row-major index into per-axis indices.
    std::array<int, 3> unflatten(std::size_t flat) const;
    /// |xi|^2 for the mode at flat index.
    double xi_squared(std::size_t flat) const;

private:
    int dim_;
    int n_;
    double half_length_;
    std::size_t size_;
    std::vector<double> wavenumbers_;
    std::vector<int> freq_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int points_per_axis, double half_length);

/// Real field over a Grid with a lazily cached spectrum.
class Field {
public:
    Field() = default;
    explicit Field(GridPtr grid, double fill = 0.0);
    Field(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values();  // drops the cached spectrum

    /// Forward transform (density convention), cached.
    const std::vector<std::complex<double>>& spectrum() const;

    double mean() const;
    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<double> values_;
    mutable std::optional<std::vector<std::complex<double>>> spectrum_;
};

/// Inverse transform with the (2*pi)^{-N} convention. The imaginary residue
/// must stay below imag_tol * max|value| (Hermitian input); it is checked
/// and discarded.
Field field_from_spectrum(const GridPtr& grid,
                          const std::vector<std::complex<double>>& spec,
                          double imag_tol = 1e-10);

/// Plain DFT synthesis without the (2*pi)^{-N} factor:
/// f(x) = sum_j F_j e^{+i<xi_j,x>} * dxi^N. Used for profile transforms that
/// follow the unnormalized integral convention.
Field field_from_spectrum_unnormalized(const GridPtr& grid,
                                       const std::vector<std::complex<double>>& spec,
                                       double imag_tol = 1e-10);

/// Spectral partial derivative along an axis (Nyquist mode zeroed).
Field derivative(const Field& f, int axis);

// --- binary snapshot + CSV export ------------------------------------------

void write_snapshot(const Field& f, const std::string& path);
Field read_snapshot(const std::string& path);
void write_csv(const Field& f, const std::string& path);

}  // namespace fbh
