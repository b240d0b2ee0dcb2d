#include "fbh/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fbh::kernels {

namespace {

double time_multiplier(const KernelSpec& spec, double xi2,
                       const specfun::MittagLeffler& ml) {
    const double x = std::pow(spec.t, spec.alpha) * xi2 * xi2;
    if (spec.which == Which::K1) return ml(x);
    return std::pow(spec.t, spec.alpha - 1.0) * ml(x);
}

}  // namespace

Field synthesize_kernel(const KernelSpec& spec, const GridPtr& grid,
                        const SynthesisOptions& opt) {
    if (!(spec.t > 0.0))
        throw std::invalid_argument("synthesize_kernel: t must be positive");
    if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
        throw std::invalid_argument("synthesize_kernel: alpha must lie in (0,1]");
    for (int d = 0; d < 3; ++d)
        if (spec.deriv[d] < 0)
            throw std::invalid_argument("synthesize_kernel: negative derivative order");
    const Grid& g = *grid;
    const double beta = spec.which == Which::K1 ? 1.0 : spec.alpha;
    specfun::MittagLeffler ml({spec.alpha, beta}, opt.ml_accuracy);

    // Nyquist check on the time multiplier, relative to the zero mode.
    const double xi_nyq = g.nyquist();
    const double m_nyq = std::abs(time_multiplier(spec, xi_nyq * xi_nyq * g.dim(), ml));
    const double m_zero = std::abs(time_multiplier(spec, 0.0, ml));
    if (m_nyq > opt.nyquist_tol * m_zero)
        throw std::runtime_error(
            "synthesize_kernel: multiplier at the Nyquist wavenumber is " +
            std::to_string(m_nyq / m_zero) + " of the zero mode (> " +
            std::to_string(opt.nyquist_tol) + "); kernel under-resolved");

    // cache by |xi|^2 (the time multiplier is radial)
    std::unordered_map<double, double> radial;
    radial.reserve(1024);
    std::vector<std::complex<double>> spec_arr(g.size());
    const int n = g.points_per_axis();
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto idx = g.unflatten(j);
        const double xi2 = g.xi_squared(j);
        auto it = radial.find(xi2);
        double base;
        if (it != radial.end()) {
            base = it->second;
        } else {
            base = time_multiplier(spec, xi2, ml);
            radial.emplace(xi2, base);
        }
        std::complex<double> m(base, 0.0);
        bool nyquist_odd = false;
        for (int d = 0; d < g.dim(); ++d) {
            if (spec.deriv[d] == 0) continue;
            if (idx[d] == n / 2 && spec.deriv[d] % 2 == 1) {
                nyquist_odd = true;  // unpaired mode; zero it for symmetry
                break;
            }
            const std::complex<double> factor(0.0, g.wavenumber(idx[d]));
            for (int r = 0; r < spec.deriv[d]; ++r) m *= factor;
        }
        if (nyquist_odd) {
            spec_arr[j] = 0.0;
            continue;
        }
        if (spec.laplacian_power > 0) {
            double lp = 1.0;
            for (int r = 0; r < spec.laplacian_power; ++r) lp *= -xi2;
            m *= lp;
        }
        spec_arr[j] = m;
    }
    return field_from_spectrum(grid, spec_arr, opt.imag_tol);
}

Field b_profile(int k, const GridPtr& grid, double nyquist_tol) {
    if (k < 0) throw std::invalid_argument("b_profile: k must be >= 0");
    const Grid& g = *grid;
    const double th_nyq2 = g.nyquist() * g.nyquist() * g.dim();
    const double m_nyq =
        std::pow(th_nyq2, 0.5 * k) * std::exp(-th_nyq2 * th_nyq2);
    if (m_nyq > nyquist_tol)
        throw std::runtime_error(
            "b_profile: |th|^k e^{-|th|^4} has not decayed at the Nyquist "
            "wavenumber; profile under-resolved");
    std::vector<std::complex<double>> spec(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double th2 = g.xi_squared(j);
        spec[j] = std::pow(th2, 0.5 * k) * std::exp(-th2 * th2);
    }
    return field_from_spectrum_unnormalized(grid, spec);
}

double lp_norm(const Field& f, double p) {
    if (p == kInfinity) {
        double m = 0.0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
    const double vol = f.grid()->cell_volume();
    double s = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) s += std::abs(v);
    } else if (p == 2.0) {
        for (double v : f.values()) s += v * v;
    } else {
        for (double v : f.values()) s += std::pow(std::abs(v), p);
    }
    return std::pow(s * vol, 1.0 / p);
}

double theta_constant(double p, const GridPtr& grid) {
    return lp_norm(b_profile(0, grid), p);
}

double theta_uniform(const GridPtr& grid) {
    const Field b0 = b_profile(0, grid);
    return std::max(lp_norm(b0, 1.0), lp_norm(b0, kInfinity));
}

bool is_admissible(int k, double p, int dim) {
    const double pinv = (p == kInfinity) ? 0.0 : 1.0 / p;
    return k < 4.0 - dim * (1.0 - pinv);
}

void check_admissible(int k, double p, int dim) {
    if (!is_admissible(k, p, dim))
        throw std::invalid_argument(
            "inadmissible parameters: require k < 4 - N(1 - 1/p), got k=" +
            std::to_string(k) + ", N=" + std::to_string(dim) +
            ", p=" + (p == kInfinity ? std::string("inf") : std::to_string(p)));
}

double smoothing_constant(Which which, int k, double p, double alpha,
                          const GridPtr& grid) {
    check_admissible(k, p, grid->dim());
    const int N = grid->dim();
    const double pinv = (p == kInfinity) ? 0.0 : 1.0 / p;
    const double bnorm = lp_norm(b_profile(k, grid), p);
    const double nk = std::pow(static_cast<double>(N), k - 1);
    if (which == Which::K1) {
        const double num = specfun::gamma_fn(1.0 - k / 4.0 - N / 4.0 + N * pinv / 4.0);
        const double den = specfun::gamma_fn(
            1.0 - alpha * k / 4.0 - alpha * N / 4.0 + alpha * N * pinv / 4.0);
        return nk * num / den * bnorm;
    }
    const double num = specfun::gamma_fn(2.0 - k / 4.0 - N / 4.0 + N * pinv / 4.0);
    const double den = specfun::gamma_fn(
        1.0 + alpha - alpha * k / 4.0 - alpha * N / 4.0 + alpha * N * pinv / 4.0);
    return nk * alpha * num / den * bnorm;
}

double rate_exponent(Which which, int k, double p, double alpha, int dim) {
    const double pinv = (p == kInfinity) ? 0.0 : 1.0 / p;
    const double base = -alpha * dim / 4.0 - alpha * k / 4.0 + alpha * dim * pinv / 4.0;
    return (which == Which::K1) ? base : base + alpha - 1.0;
}

}  // namespace fbh::kernels
