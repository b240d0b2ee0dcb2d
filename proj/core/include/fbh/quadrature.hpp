#pragma once

#include <functional>
#include <stdexcept>

namespace fbh::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) on a finite interval.
/// Throws fbh::quad::NoConvergence if the interval budget is exhausted
/// before the requested tolerance is met.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// Semi-infinite integral over [a, inf), mapped to a finite interval via
/// t = a + u/(1-u). The integrand must decay at infinity.
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        const Options& opt = {});

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, double reached)
        : std::runtime_error(what), reached_tolerance(reached) {}
    double reached_tolerance;
};

}  // namespace fbh::quad
