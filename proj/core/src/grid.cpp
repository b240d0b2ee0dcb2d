#include "fbh/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace fbh {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// c2c transform of a complex buffer, in place; sign is FFTW_FORWARD or
// FFTW_BACKWARD. The planner is not thread-safe, execution is.
void run_fft(const Grid& g, std::vector<std::complex<double>>& data, int sign) {
    const int n = g.points_per_axis();
    std::vector<int> dims(g.dim(), n);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(g.dim(), dims.data(), ptr, ptr, sign,
                             FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

// (-1)^{sum of frequencies}: phase shift from placing the origin at the box
// center rather than the first sample.
double center_sign(const Grid& g, std::size_t flat) {
    const auto idx = g.unflatten(flat);
    long s = 0;
    for (int d = 0; d < g.dim(); ++d) s += g.frequency(idx[d]);
    return (s % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double half_length)
    : dim_(dim), n_(points_per_axis), half_length_(half_length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
        throw std::invalid_argument(
            "Grid: points_per_axis must be a power of two >= 8");
    if (!(half_length_ > 0.0))
        throw std::invalid_argument("Grid: half_length must be positive");
    size_ = 1;
    for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_);
    wavenumbers_.resize(n_);
    freq_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        const int f = (j <= n_ / 2) ? j : j - n_;
        freq_[j] = f;
        wavenumbers_[j] = kPi * f / half_length_;
    }
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= dx();
    return v;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return idx;
}

double Grid::xi_squared(std::size_t flat) const {
    const auto idx = unflatten(flat);
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) {
        const double xi = wavenumbers_[idx[d]];
        s += xi * xi;
    }
    return s;
}

GridPtr make_grid(int dim, int points_per_axis, double half_length) {
    return std::make_shared<Grid>(dim, points_per_axis, half_length);
}

Field::Field(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
        throw std::invalid_argument("Field: value count does not match grid");
}

std::vector<double>& Field::mutable_values() {
    spectrum_.reset();
    return values_;
}

const std::vector<std::complex<double>>& Field::spectrum() const {
    if (!spectrum_) {
        const Grid& g = *grid_;
        std::vector<std::complex<double>> buf(values_.begin(), values_.end());
        run_fft(g, buf, FFTW_FORWARD);
        const double scale = g.cell_volume();
        for (std::size_t j = 0; j < buf.size(); ++j)
            buf[j] *= scale * center_sign(g, j);
        spectrum_ = std::move(buf);
    }
    return *spectrum_;
}

double Field::mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / values_.size();
}

namespace {
void check_compatible(const Field& a, const Field& b) {
    if (a.values().size() != b.values().size())
        throw std::invalid_argument("Field arithmetic: grids do not match");
}
}  // namespace

Field& Field::operator+=(const Field& other) {
    check_compatible(*this, other);
    spectrum_.reset();
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_compatible(*this, other);
    spectrum_.reset();
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    spectrum_.reset();
    for (double& v : values_) v *= s;
    return *this;
}

namespace {

Field synthesize(const GridPtr& grid,
                 const std::vector<std::complex<double>>& spec, double scale,
                 double imag_tol) {
    const Grid& g = *grid;
    if (spec.size() != g.size())
        throw std::invalid_argument("synthesize: spectrum size mismatch");
    std::vector<std::complex<double>> buf(g.size());
    for (std::size_t j = 0; j < spec.size(); ++j)
        buf[j] = spec[j] * center_sign(g, j);
    run_fft(g, buf, FFTW_BACKWARD);
    double dxi = 1.0;
    for (int d = 0; d < g.dim(); ++d) dxi *= kPi / g.half_length();
    const double s = scale * dxi;
    double max_abs = 0.0, max_imag = 0.0;
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out[i] = buf[i].real() * s;
        max_abs = std::max(max_abs, std::abs(out[i]));
        max_imag = std::max(max_imag, std::abs(buf[i].imag() * s));
    }
    if (max_imag > imag_tol * std::max(1e-300, max_abs))
        throw std::runtime_error(
            "synthesize: imaginary residue exceeds tolerance (spectrum not "
            "Hermitian)");
    return Field(grid, std::move(out));
}

}  // namespace

Field field_from_spectrum(const GridPtr& grid,
                          const std::vector<std::complex<double>>& spec,
                          double imag_tol) {
    double inv2pi = 1.0;
    for (int d = 0; d < grid->dim(); ++d) inv2pi /= 2.0 * kPi;
    return synthesize(grid, spec, inv2pi, imag_tol);
}

Field field_from_spectrum_unnormalized(
    const GridPtr& grid, const std::vector<std::complex<double>>& spec,
    double imag_tol) {
    return synthesize(grid, spec, 1.0, imag_tol);
}

Field derivative(const Field& f, int axis) {
    const Grid& g = *f.grid();
    if (axis < 0 || axis >= g.dim())
        throw std::invalid_argument("derivative: axis out of range");
    const auto& spec = f.spectrum();
    std::vector<std::complex<double>> dspec(spec.size());
    const int n = g.points_per_axis();
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const auto idx = g.unflatten(j);
        if (idx[axis] == n / 2) {
            dspec[j] = 0.0;  // unpaired Nyquist mode
            continue;
        }
        dspec[j] = spec[j] * std::complex<double>(0.0, g.wavenumber(idx[axis]));
    }
    return field_from_spectrum(f.grid(), dspec, 1e-8);
}

// --- IO ----------------------------------------------------------------------

void write_snapshot(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    const Grid& g = *f.grid();
    const char magic[4] = {'F', 'B', 'H', '1'};
    const std::uint32_t dim = g.dim();
    const std::uint32_t n = g.points_per_axis();
    const double half = g.half_length();
    const std::uint64_t payload = f.values().size() * sizeof(double);
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&half), 8);
    out.write(reinterpret_cast<const char*>(&payload), 8);
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(payload));
    if (!out) throw std::runtime_error("write_snapshot: write failed");
}

Field read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    std::uint32_t dim = 0, n = 0;
    double half = 0.0;
    std::uint64_t payload = 0;
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FBH1", 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic");
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&half), 8);
    in.read(reinterpret_cast<char*>(&payload), 8);
    auto grid = make_grid(static_cast<int>(dim), static_cast<int>(n), half);
    if (payload != grid->size() * sizeof(double))
        throw std::runtime_error("read_snapshot: payload length mismatch");
    std::vector<double> values(grid->size());
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(payload));
    if (!in) throw std::runtime_error("read_snapshot: truncated file");
    return Field(grid, std::move(values));
}

void write_csv(const Field& f, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    const Grid& g = *f.grid();
    for (int d = 0; d < g.dim(); ++d) std::fprintf(out, "x%d,", d);
    std::fprintf(out, "value\n");
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        const auto idx = g.unflatten(i);
        for (int d = 0; d < g.dim(); ++d)
            std::fprintf(out, "%.17g,", g.coord(idx[d]));
        std::fprintf(out, "%.17g\n", f.values()[i]);
    }
    std::fclose(out);
}

}  // namespace fbh
