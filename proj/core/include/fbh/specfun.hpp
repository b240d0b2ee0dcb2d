#pragma once

#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fbh::specfun {

struct MlParams {
    double alpha;  // in (0,1]; alpha=1 supported for beta in {1,2} only
    double beta;   // > 0
};

struct Accuracy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_terms = 4000;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double reachable)
        : std::runtime_error(what), reachable_tolerance(reachable) {}
    /// Best absolute tolerance the method could deliver for the request.
    double reachable_tolerance;
};

/// Gamma(x) for x > 0. Throws std::domain_error for x <= 0 and
/// std::overflow_error past the double range (x > 171.6).
double gamma_fn(double x);

/// log|Gamma(x)|, any real x away from the poles.
double log_abs_gamma(double x);

/// 1/Gamma(x) as an entire function: zero at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// sin(pi x) with exact argument reduction (exact zeros at integers).
double sin_pi(double x);

/// E_{alpha,beta}(-x) for x >= 0.
///
/// Three regimes, switched on the size of the largest power-series term
/// (~exp(x^{1/alpha})): the truncated series while cancellation stays below
/// tolerance, the large-x asymptotic expansion once its optimal truncation
/// error is small enough, and a branch-cut integral representation in the
/// band where neither expansion reaches double-precision tolerance.
double mittag_leffler_neg(const MlParams& p, double x, const Accuracy& acc = {});

/// E_{alpha,beta}(+z) for z >= 0 (all series terms positive; no cancellation).
double mittag_leffler_pos(const MlParams& p, double z, const Accuracy& acc = {});

/// Reusable evaluator for E_{alpha,beta}(-x) with a Chebyshev table over the
/// integral-representation band, built on first use. Safe for concurrent
/// evaluation; the table contents do not depend on when it is built.
class MittagLeffler {
public:
    explicit MittagLeffler(MlParams p, Accuracy acc = {});
    double operator()(double x) const;
    const MlParams& params() const { return params_; }

private:
    void build_table() const;

    MlParams params_;
    Accuracy acc_;
    double x_series_end_ = 0.0;  // series used for x <= this
    double x_asym_begin_ = 0.0;  // asymptotic used for x >= this
    double w_lo_ = 0.0, w_hi_ = 0.0;  // Chebyshev interval in w = log x
    mutable std::once_flag table_once_;
    mutable std::vector<double> cheb_;  // Chebyshev coefficients
};

/// M-Wright function M_alpha(zeta) by its power series, with the
/// windowed stopping rule. Throws ConvergenceError (carrying the reachable
/// tolerance) once round-off in the alternating sum exceeds the request.
double m_wright(double alpha, double zeta, const Accuracy& acc = {});

/// M_alpha(zeta) through the collapsed Hankel-contour integral; usable
/// beyond the practical radius of the series.
double m_wright_integral(double alpha, double zeta, const Accuracy& acc = {});

/// Series if it can reach the tolerance at this zeta, integral otherwise.
double m_wright_auto(double alpha, double zeta, const Accuracy& acc = {});

/// Moment integral  int_0^inf nu^theta M_alpha(nu) dnu  for theta > -1,
/// adaptive quadrature plus a tail bound. Compare against
/// Gamma(theta+1)/Gamma(theta*alpha+1).
double mwright_moment(double alpha, double theta, const Accuracy& acc = {});

void validate(const MlParams& p);
void validate(const Accuracy& a);

}  // namespace fbh::specfun
