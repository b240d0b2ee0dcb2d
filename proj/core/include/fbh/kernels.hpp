#pragma once

#include <array>
#include <limits>

#include "fbh/grid.hpp"
#include "fbh/specfun.hpp"

namespace fbh::kernels {

enum class Which { K1, K2 };

/// Resolvent kernel request: K1 carries the multiplier E_{a,1}(-t^a |xi|^4),
/// K2 carries t^{a-1} E_{a,a}(-t^a |xi|^4). Derivatives enter as (i xi)^deriv
/// multipliers; laplacian_power adds (-|xi|^2)^m for even-order operators.
struct KernelSpec {
    Which which = Which::K1;
    double alpha = 0.5;  // in (0,1]; 1 only as the classical limit
    double t = 1.0;      // > 0
    std::array<int, 3> deriv{0, 0, 0};
    int laplacian_power = 0;

    int order() const {
        return deriv[0] + deriv[1] + deriv[2] + 2 * laplacian_power;
    }
};

struct SynthesisOptions {
    /// Required decay of the (underived) time multiplier at the Nyquist
    /// wavenumber, relative to its zero-mode value.
    double nyquist_tol = 1e-12;
    double imag_tol = 1e-10;
    specfun::Accuracy ml_accuracy{};
};

/// Inverse transform of the kernel multiplier on the grid ((2 pi)^{-N}
/// convention). Throws std::runtime_error when the multiplier has not
/// decayed below nyquist_tol at the Nyquist wavenumber.
Field synthesize_kernel(const KernelSpec& spec, const GridPtr& grid,
                        const SynthesisOptions& opt = {});

/// Profile transform  B_k(y) = int |th|^k e^{i<y,th>} e^{-|th|^4} dth
/// (unnormalized convention, no (2 pi)^{-N}).
Field b_profile(int k, const GridPtr& grid, double nyquist_tol = 1e-12);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Discrete L^p norm (cell-volume weighted Riemann sum); p = infinity gives
/// the max norm.
double lp_norm(const Field& f, double p);

/// Theta_{p,N} = || B_0 ||_{L^p} on the given grid.
double theta_constant(double p, const GridPtr& grid);

/// p-independent bound max(Theta_{1,N}, Theta_{inf,N}); valid for every p
/// by Lebesgue interpolation.
double theta_uniform(const GridPtr& grid);

/// Closed-form smoothing constants of the kernel L^p estimates:
///   K1:  N^{k-1} Gamma(1 - k/4 - N/4 + N/(4p))
///        / Gamma(1 - a k/4 - a N/4 + a N/(4p)) * ||B_k||_{L^p}
///   K2:  N^{k-1} a Gamma(2 - k/4 - N/4 + N/(4p))
///        / Gamma(1 + a - a k/4 - a N/4 + a N/(4p)) * ||B_k||_{L^p}
/// Requires k < 4 - N(1 - 1/p).
double smoothing_constant(Which which, int k, double p, double alpha,
                          const GridPtr& grid);

/// Decay exponent in t of ||D^k K(t)||_{L^p}:
///   K1: -aN/4 - ak/4 + aN/(4p);  K2: a - 1 - aN/4 + aN/(4p) - ak/4.
double rate_exponent(Which which, int k, double p, double alpha, int dim);

/// Admissibility k < 4 - N(1 - 1/p); throws std::invalid_argument naming the
/// violated inequality when check fails.
void check_admissible(int k, double p, int dim);
bool is_admissible(int k, double p, int dim);

}  // namespace fbh::kernels
