#pragma once

#include <vector>

#include "fbh/grid.hpp"
#include "fbh/report.hpp"

namespace fbh::orlicz {

/// Parameters of the Young function  Xi(z) = e^{|z|^p} - 1.
struct OrliczParams {
    double p_exp = 2.0;       // >= 1
    double bisect_tol = 1e-10;
    double kappa_max = 1e12;
};

void validate(const OrliczParams& op);

/// Modular  int Xi(|f|/kappa)  as a cell-volume weighted sum.
double modular(const Field& f, double kappa, const OrliczParams& op);

/// Luxemburg norm  inf{ kappa > 0 : modular(f, kappa) <= 1 }  by monotone
/// bisection. Returns 0 for the zero field; throws std::runtime_error if the
/// bracket cannot be established within the widening budget.
double luxemburg_norm(const Field& f, const OrliczParams& op);

/// ||f||_{L^q} <= Gamma(q/p + 1)^{1/q} ||f||_Xi  for q >= p >= 1.
EstimateReport embedding_gap_lq(const Field& f, double p_exp, double q);

/// ||f||_Xi <= (log 2)^{-1/p} (||f||_{L^q} + ||f||_{L^inf})  for 1 <= q <= p.
EstimateReport embedding_gap_linf(const Field& f, double p_exp, double q);

/// Smoothing of the resolvent operators in the Orlicz norm. Part (i) checks
///   ||Z1(t) phi||_Xi <= Theta_N Gamma(1 - N/(4h)) t^{-aN/(4h)}
///                       [log(1 + t^{-aN/4})]^{-1/p} ||phi||_{L^h}
/// and the analogous bound for t^{1-a} Z2(t) with the Gautschi constant
/// a Theta_N (1 - aN/(4h))^{(a-1)N/(4h)}. Part (ii) checks
///   ||Z1 phi||_Xi <= ||phi||_Xi  and  ||Z2 phi||_Xi <= t^{a-1} ||phi||_Xi.
std::vector<EstimateReport> orlicz_smoothing_gap(const Field& phi, double h,
                                                 const std::vector<double>& t_samples,
                                                 double alpha, double p_exp);

}  // namespace fbh::orlicz
