#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fbh/grid.hpp"
#include "fbh/specfun.hpp"

namespace fbh::solver {

/// Exponential-type source  G(u) = L u |u|^{m-1} e^{kappa |u|^p}
/// with m > 2 or m = 1, p > 1, L > 0.
struct ExpType {
    double m = 3.0;
    double kappa = 1.0;
    double p_exp = 2.0;
    double L = 1.0;
};

/// Source  G(u) = Laplacian(u^3 - u)  (double-well potential derivative).
struct CahnHilliard {};

using Nonlinearity = std::variant<ExpType, CahnHilliard>;

struct FractionalParams {
    double alpha = 0.6;  // in (0,1)
    Nonlinearity nonlinearity = CahnHilliard{};
};

void validate(const FractionalParams& fp);
bool is_cahn_hilliard(const FractionalParams& fp);

/// Graded partition of [0,T]: t_j = T (j/M)^gamma.
struct TimeMesh {
    double T = 1.0;
    int steps = 32;
    double grading = 1.0;  // >= 1

    static TimeMesh graded(double T, int steps, double alpha);
    double node(int j) const;
    void validate() const;
};

/// Per-mode multiplication by E_{a,1}(-t^a |xi|^4); t = 0 is the identity.
Field apply_z1(double t, const Field& f, double alpha);
/// Per-mode multiplication by t^{a-1} E_{a,a}(-t^a |xi|^4); requires t > 0.
Field apply_z2(double t, const Field& f, double alpha);

/// ExpType: pointwise G(u). CahnHilliard: Laplacian(u^3-u) spectrally.
/// Exponential overflow surfaces as non-finite values (the march turns
/// those into a blow-up signal, not an error).
Field eval_nonlinearity(const Field& u, const FractionalParams& fp);

/// Product-integration weights for int_0^{t_n} (t_n-s)^{a-1}
/// E_{a,a}(-(t_n-s)^a lambda) g(s) ds with piecewise-constant density:
///   w_i = Psi(t_n - t_i) - Psi(t_n - t_{i+1}),
///   Psi(tau) = tau^a E_{a,a+1}(-lambda tau^a).
/// Weights are nonnegative and sum to Psi(t_n).
std::vector<double> volterra_weights(const TimeMesh& mesh, int n, double lambda,
                                     double alpha);
std::vector<double> volterra_weights(const TimeMesh& mesh, int n, double lambda,
                                     double alpha,
                                     const specfun::MittagLeffler& ml_a_a1);

struct NormTraceRow {
    double t;
    double l2;
    double linf;
    double lp;
    double orlicz;
    bool blow_up;
};

struct MarchOptions {
    double blow_up_threshold = 1e6;
    double trace_p = 4.0;    // L^p column of the norm trace
    double orlicz_p = 2.0;   // Xi exponent for CahnHilliard traces
    int threads = 1;
    std::vector<int> snapshot_nodes;
    bool record_trace = true;
};

struct Trajectory {
    std::vector<double> times;  // nodes actually reached
    std::vector<NormTraceRow> trace;
    std::vector<std::pair<int, Field>> snapshots;
    Field final_state;
    bool blow_up = false;
    int blow_up_index = -1;
};

/// March the mild-solution Volterra equation in Fourier space: left-endpoint
/// product integration plus one predictor-corrector sweep per step.
Trajectory march(const Field& u0, const FractionalParams& fp,
                 const TimeMesh& mesh, const MarchOptions& opt = {});

struct PicardRun {
    std::vector<double> d_sup;        // d_j = sup_{t,x} |v_{j+1} - v_j|
    std::vector<double> iterate_sup;  // sup_{t,x} |v_j|, j = 0..n_iters
    std::vector<Field> final_iterates;  // v_j at the mesh end
    double T0 = 0.0;
    double C_alpha = 0.0;
    double E = 0.0;
    double A = 0.0;
    double b2_l1 = 0.0;  // int |B_2|, grid-computed
};

/// Successive approximations for the Cahn-Hilliard problem (alpha > 1/2,
/// ||u0||_inf <= E). Midpoint-density product integration with the
/// Laplacian folded into the quadrature multiplier.
PicardRun picard_solve(const Field& u0, const FractionalParams& fp,
                       const TimeMesh& mesh, int n_iters,
                       std::optional<double> E = std::nullopt);

/// T0 = min{1, (a G(a/2+1) / (4 b2 A G(3/2) G(a/2)))^{2/a},
///             (a G(a/2+1) / (4 b2 A G(3/2)))^{2/a}}.
double compute_t0(double E, double A, double alpha, double b2_l1);

/// C_a = 4 b2 A G(3/2) max(E/a, G(a/2) / (2 G(a/2+1))).
double compute_c_alpha(double E, double A, double alpha, double b2_l1);

/// max_{|z|<=E} sum_{k=1..3} |D^k F(z)| for F(u) = u^3 - u, i.e.
/// max |3z^2-1| + |6z| + 6, by candidate points plus dense sampling.
double nonlinearity_budget(double E);

struct LocalTimeBound {
    double im1;      // Lipschitz-type constant of the fixed-point map
    double t_bound;  // (alpha / im1)^{1/alpha}
};

/// Contraction constant and admissible horizon for the exponential source:
///   I0 = 2 (log2)^{-1/p} (||u0||_inf + ||u0||_Xi) + im,
///   I1 = 2L [2 + G(aleph+1)^{1/(aleph p)}
///            G(aleph(m-1)/(aleph-1)+1)^{(aleph-1)/(aleph p)}]
///        (log2)^{-1/p} I0^{m-1} e^{kappa I0^p}.
LocalTimeBound local_time_exp(double u0_linf, double u0_orlicz,
                              const ExpType& nl, double alpha, double im,
                              double aleph);

}  // namespace fbh::solver
