#include "fbh/solver.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "fbh/kernels.hpp"
#include "fbh/orlicz.hpp"

namespace fbh::solver {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 1 || count < 4096) {
        body(0, count);
        return;
    }
    const int nt = std::min<int>(threads, 64);
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

std::vector<std::complex<double>> apply_radial_multiplier(
    const Field& f, const std::function<double(double)>& mult) {
    const Grid& g = *f.grid();
    const auto& spec = f.spectrum();
    std::vector<std::complex<double>> out(spec.size());
    for (std::size_t j = 0; j < spec.size(); ++j)
        out[j] = spec[j] * mult(g.xi_squared(j));
    return out;
}

}  // namespace

void validate(const FractionalParams& fp) {
    if (!(fp.alpha > 0.0 && fp.alpha < 1.0))
        throw std::invalid_argument("FractionalParams: alpha must lie in (0,1)");
    if (const auto* e = std::get_if<ExpType>(&fp.nonlinearity)) {
        if (!(e->m > 2.0 || e->m == 1.0))
            throw std::invalid_argument(
                "FractionalParams: m must satisfy m > 2 or m = 1");
        if (!(e->p_exp > 1.0))
            throw std::invalid_argument("FractionalParams: p must be > 1");
        if (!(e->kappa > 0.0))
            throw std::invalid_argument("FractionalParams: kappa must be > 0");
        if (!(e->L >= 0.0))
            throw std::invalid_argument("FractionalParams: L must be >= 0");
    }
}

bool is_cahn_hilliard(const FractionalParams& fp) {
    return std::holds_alternative<CahnHilliard>(fp.nonlinearity);
}

TimeMesh TimeMesh::graded(double T, int steps, double alpha) {
    TimeMesh m;
    m.T = T;
    m.steps = steps;
    m.grading = std::max(1.0, 2.0 / alpha);
    m.validate();
    return m;
}

double TimeMesh::node(int j) const {
    if (j == steps) return T;  // exact endpoint
    return T * std::pow(static_cast<double>(j) / steps, grading);
}

void TimeMesh::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("TimeMesh: T must be positive");
    if (steps < 1) throw std::invalid_argument("TimeMesh: steps must be >= 1");
    if (!(grading >= 1.0))
        throw std::invalid_argument("TimeMesh: grading must be >= 1");
}

Field apply_z1(double t, const Field& f, double alpha) {
    if (!(t >= 0.0)) throw std::invalid_argument("apply_z1: t must be >= 0");
    if (t == 0.0) return f;
    specfun::MittagLeffler ml({alpha, 1.0});
    const double ta = std::pow(t, alpha);
    auto spec = apply_radial_multiplier(
        f, [&](double xi2) { return ml(ta * xi2 * xi2); });
    return field_from_spectrum(f.grid(), spec, 1e-9);
}

Field apply_z2(double t, const Field& f, double alpha) {
    if (!(t > 0.0)) throw std::invalid_argument("apply_z2: t must be > 0");
    specfun::MittagLeffler ml({alpha, alpha});
    const double ta = std::pow(t, alpha);
    const double pre = std::pow(t, alpha - 1.0);
    auto spec = apply_radial_multiplier(
        f, [&](double xi2) { return pre * ml(ta * xi2 * xi2); });
    return field_from_spectrum(f.grid(), spec, 1e-9);
}

Field eval_nonlinearity(const Field& u, const FractionalParams& fp) {
    if (const auto* e = std::get_if<ExpType>(&fp.nonlinearity)) {
        Field g(u.grid());
        auto& out = g.mutable_values();
        const auto& v = u.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double a = std::abs(v[i]);
            out[i] = e->L * v[i] * std::pow(a, e->m - 1.0) *
                     std::exp(e->kappa * std::pow(a, e->p_exp));
        }
        return g;
    }
    // Cahn-Hilliard: Laplacian(u^3 - u) via the spectral multiplier -|xi|^2
    Field w(u.grid());
    auto& wv = w.mutable_values();
    const auto& v = u.values();
    for (std::size_t i = 0; i < v.size(); ++i) wv[i] = v[i] * v[i] * v[i] - v[i];
    auto spec = apply_radial_multiplier(w, [](double xi2) { return -xi2; });
    return field_from_spectrum(u.grid(), spec, 1e-8);
}

std::vector<double> volterra_weights(const TimeMesh& mesh, int n, double lambda,
                                     double alpha,
                                     const specfun::MittagLeffler& ml) {
    if (n < 1 || n > mesh.steps)
        throw std::invalid_argument("volterra_weights: need 1 <= n <= steps");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("volterra_weights: lambda must be >= 0");
    const double tn = mesh.node(n);
    auto psi = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double ta = std::pow(tau, alpha);
        return ta * ml(lambda * ta);
    };
    std::vector<double> w(n);
    double right = psi(tn - mesh.node(0));
    for (int i = 0; i < n; ++i) {
        const double left = psi(tn - mesh.node(i + 1));
        w[i] = right - left;
        right = left;
    }
    return w;
}

std::vector<double> volterra_weights(const TimeMesh& mesh, int n, double lambda,
                                     double alpha) {
    specfun::MittagLeffler ml({alpha, alpha + 1.0});
    return volterra_weights(mesh, n, lambda, alpha, ml);
}

namespace {

struct ModeTable {
    std::vector<double> lambda;  // |xi|^4 per mode
    std::vector<double> xi2;     // |xi|^2 per mode
    // modes grouped by equal lambda (the quadrature weights are radial)
    std::vector<std::pair<double, std::vector<std::size_t>>> groups;
};

ModeTable build_modes(const Grid& g) {
    ModeTable t;
    t.lambda.resize(g.size());
    t.xi2.resize(g.size());
    std::map<double, std::vector<std::size_t>> by_lambda;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x2 = g.xi_squared(j);
        t.xi2[j] = x2;
        t.lambda[j] = x2 * x2;
        by_lambda[t.lambda[j]].push_back(j);
    }
    t.groups.assign(by_lambda.begin(), by_lambda.end());
    return t;
}

// Psi(tau) per unique lambda with memoization over the fixed set of
// tau = t_n - t_i values used by a marching step.
class WeightEngine {
public:
    WeightEngine(const TimeMesh& mesh, double alpha)
        : mesh_(mesh), alpha_(alpha), ml_({alpha, alpha + 1.0}) {}

    // weights for step n at given lambda (size n)
    void weights(int n, double lambda, std::vector<double>& out) const {
        out.resize(n);
        const double tn = mesh_.node(n);
        double right = psi(tn, lambda);
        for (int i = 0; i < n; ++i) {
            const double tau = tn - mesh_.node(i + 1);
            const double left = psi(tau, lambda);
            out[i] = right - left;
            right = left;
        }
    }

    double psi(double tau, double lambda) const {
        if (tau <= 0.0) return 0.0;
        const double ta = std::pow(tau, alpha_);
        return ta * ml_(lambda * ta);
    }

    const specfun::MittagLeffler& ml() const { return ml_; }

private:
    const TimeMesh& mesh_;
    double alpha_;
    specfun::MittagLeffler ml_;
};

double monitor_norm(const Field& u, const FractionalParams& fp) {
    const double linf = kernels::lp_norm(u, kernels::kInfinity);
    if (is_cahn_hilliard(fp)) return linf;
    orlicz::OrliczParams op;
    op.p_exp = std::get<ExpType>(fp.nonlinearity).p_exp;
    return linf + orlicz::luxemburg_norm(u, op);
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

Trajectory march(const Field& u0, const FractionalParams& fp,
                 const TimeMesh& mesh, const MarchOptions& opt) {
    validate(fp);
    mesh.validate();
    if (!all_finite(u0.values()))
        throw std::invalid_argument("march: initial state must be finite");

    const GridPtr grid = u0.grid();
    const Grid& g = *grid;
    const double alpha = fp.alpha;
    const ModeTable modes = build_modes(g);
    const WeightEngine engine(mesh, alpha);
    specfun::MittagLeffler ml_hom({alpha, 1.0});

    const auto& u0_spec = u0.spectrum();
    const std::size_t nm = g.size();
    const int M = mesh.steps;

    std::vector<std::vector<std::complex<double>>> g_hist;
    g_hist.reserve(M + 1);
    g_hist.push_back(eval_nonlinearity(u0, fp).spectrum());

    orlicz::OrliczParams trace_op;
    trace_op.p_exp = opt.orlicz_p;
    if (const auto* e = std::get_if<ExpType>(&fp.nonlinearity))
        trace_op.p_exp = e->p_exp;

    Trajectory traj;
    traj.times.push_back(0.0);
    auto record = [&](int node, const Field& u, bool blow_up) {
        if (!opt.record_trace) return;
        NormTraceRow row;
        row.t = mesh.node(node);
        row.blow_up = blow_up;
        if (blow_up) {
            row.l2 = row.linf = row.lp = row.orlicz =
                std::numeric_limits<double>::quiet_NaN();
        } else {
            row.l2 = kernels::lp_norm(u, 2.0);
            row.linf = kernels::lp_norm(u, kernels::kInfinity);
            row.lp = kernels::lp_norm(u, opt.trace_p);
            row.orlicz = orlicz::luxemburg_norm(u, trace_op);
        }
        traj.trace.push_back(row);
    };
    record(0, u0, false);
    for (int s : opt.snapshot_nodes)
        if (s == 0) traj.snapshots.emplace_back(0, u0);

    Field u = u0;
    std::vector<double> w;
    std::vector<std::complex<double>> acc(nm);
    for (int n = 1; n <= M; ++n) {
        const double tn = mesh.node(n);
        const double tna = std::pow(tn, alpha);

        // homogeneous part + history quadrature with left samples
        // (lag-1 explicit); the newest subinterval is corrected below.
        parallel_for(modes.groups.size(), opt.threads,
                     [&](std::size_t lo, std::size_t hi) {
            std::vector<double> wl;
            for (std::size_t gi = lo; gi < hi; ++gi) {
                const auto& [lambda, members] = modes.groups[gi];
                engine.weights(n, lambda, wl);
                const double hom = ml_hom(tna * lambda);
                for (std::size_t j : members) {
                    std::complex<double> s = hom * u0_spec[j];
                    for (int i = 0; i < n; ++i) s += wl[i] * g_hist[i][j];
                    acc[j] = s;
                }
            }
        });

        Field u_pred;
        bool numeric_bad = false;
        try {
            u_pred = field_from_spectrum(grid, acc, 1e-6);
        } catch (const std::runtime_error&) {
            numeric_bad = true;
        }
        if (numeric_bad || !all_finite(u_pred.values())) {
            traj.blow_up = true;
            traj.blow_up_index = n;
            traj.times.push_back(tn);
            record(n, u, true);
            break;
        }

        // one fixed-point sweep: trapezoidal density on the last subinterval
        Field g_pred = eval_nonlinearity(u_pred, fp);
        bool g_ok = all_finite(g_pred.values());
        if (g_ok) {
            const auto& gp = g_pred.spectrum();
            parallel_for(modes.groups.size(), opt.threads,
                         [&](std::size_t lo, std::size_t hi) {
                for (std::size_t gi = lo; gi < hi; ++gi) {
                    const auto& [lambda, members] = modes.groups[gi];
                    const double w_last =
                        engine.psi(tn - mesh.node(n - 1), lambda);
                    for (std::size_t j : members)
                        acc[j] += 0.5 * w_last * (gp[j] - g_hist[n - 1][j]);
                }
            });
        }
        Field u_next;
        try {
            u_next = field_from_spectrum(grid, acc, 1e-6);
        } catch (const std::runtime_error&) {
            g_ok = false;
        }
        if (!g_ok || !all_finite(u_next.values())) {
            traj.blow_up = true;
            traj.blow_up_index = n;
            traj.times.push_back(tn);
            record(n, u, true);
            break;
        }
        u = std::move(u_next);
        traj.times.push_back(tn);

        Field g_next = eval_nonlinearity(u, fp);
        const double mon = monitor_norm(u, fp);
        const bool mon_bad =
            !std::isfinite(mon) || mon > opt.blow_up_threshold ||
            !all_finite(g_next.values());
        record(n, u, mon_bad);
        if (mon_bad) {
            traj.blow_up = true;
            traj.blow_up_index = n;
            break;
        }
        g_hist.push_back(g_next.spectrum());
        for (int s : opt.snapshot_nodes)
            if (s == n) traj.snapshots.emplace_back(n, u);
    }
    traj.final_state = u;
    return traj;
}

PicardRun picard_solve(const Field& u0, const FractionalParams& fp,
                       const TimeMesh& mesh, int n_iters,
                       std::optional<double> E_opt) {
    validate(fp);
    mesh.validate();
    if (!is_cahn_hilliard(fp))
        throw std::invalid_argument("picard_solve: Cahn-Hilliard only");
    if (!(fp.alpha > 0.5))
        throw std::invalid_argument("picard_solve: requires alpha > 1/2");
    if (n_iters < 1)
        throw std::invalid_argument("picard_solve: n_iters must be >= 1");

    const GridPtr grid = u0.grid();
    const double alpha = fp.alpha;
    const double u0_sup = kernels::lp_norm(u0, kernels::kInfinity);
    const double E = E_opt.value_or(std::max(u0_sup, 1e-12));
    if (u0_sup > E * (1.0 + 1e-12))
        throw std::invalid_argument("picard_solve: requires ||u0||_inf <= E");

    PicardRun run;
    run.E = E;
    run.A = nonlinearity_budget(E);
    run.b2_l1 = kernels::lp_norm(kernels::b_profile(2, grid), 1.0);
    run.T0 = compute_t0(E, run.A, alpha, run.b2_l1);
    run.C_alpha = compute_c_alpha(E, run.A, alpha, run.b2_l1);

    const ModeTable modes = build_modes(*grid);
    const WeightEngine engine(mesh, alpha);
    specfun::MittagLeffler ml_hom({alpha, 1.0});
    const int M = mesh.steps;
    const std::size_t nm = grid->size();

    // v_j stored at every node; v_0(t) = u0
    std::vector<Field> v_cur(M + 1, u0), v_next(M + 1);
    v_next[0] = u0;
    run.iterate_sup.push_back(u0_sup);
    run.final_iterates.push_back(u0);

    // homogeneous part per node, computed once
    std::vector<std::vector<std::complex<double>>> hom(M + 1);
    const auto& u0_spec = u0.spectrum();
    for (int k = 1; k <= M; ++k) {
        const double ta = std::pow(mesh.node(k), alpha);
        hom[k].resize(nm);
        for (std::size_t j = 0; j < nm; ++j)
            hom[k][j] = ml_hom(ta * modes.lambda[j]) * u0_spec[j];
    }

    auto f_cubic = [&](const Field& u) {
        Field w(grid);
        auto& wv = w.mutable_values();
        const auto& uv = u.values();
        for (std::size_t i = 0; i < uv.size(); ++i)
            wv[i] = uv[i] * uv[i] * uv[i] - uv[i];
        return w;
    };

    for (int j = 0; j < n_iters; ++j) {
        // spectra of F(v_j) at all nodes
        std::vector<std::vector<std::complex<double>>> fs(M + 1);
        for (int k = 0; k <= M; ++k) fs[k] = f_cubic(v_cur[k]).spectrum();

        double d_sup = 0.0, v_sup = 0.0;
        std::vector<double> wl;
        std::vector<std::complex<double>> acc(nm);
        for (int k = 1; k <= M; ++k) {
            for (const auto& [lambda, members] : modes.groups) {
                engine.weights(k, lambda, wl);
                for (std::size_t m : members) {
                    std::complex<double> s = hom[k][m];
                    // midpoint density, Laplacian folded in as -|xi|^2
                    for (int i = 0; i < k; ++i)
                        s += wl[i] * (-modes.xi2[m]) * 0.5 *
                             (fs[i][m] + fs[i + 1][m]);
                    acc[m] = s;
                }
            }
            v_next[k] = field_from_spectrum(grid, acc, 1e-6);
            Field diff = v_next[k];
            diff -= v_cur[k];
            d_sup = std::max(d_sup,
                             kernels::lp_norm(diff, kernels::kInfinity));
            v_sup = std::max(v_sup,
                             kernels::lp_norm(v_next[k], kernels::kInfinity));
        }
        run.d_sup.push_back(d_sup);
        run.iterate_sup.push_back(std::max(v_sup, u0_sup));
        run.final_iterates.push_back(v_next[M]);
        std::swap(v_cur, v_next);
    }
    return run;
}

double compute_t0(double E, double A, double alpha, double b2_l1) {
    if (!(E > 0.0 && A > 0.0 && alpha > 0.0 && b2_l1 > 0.0))
        throw std::invalid_argument("compute_t0: all inputs must be positive");
    const double g32 = specfun::gamma_fn(1.5);
    const double num = alpha * specfun::gamma_fn(alpha / 2.0 + 1.0);
    const double den = 4.0 * b2_l1 * A * g32;
    const double second =
        std::pow(num / (den * specfun::gamma_fn(alpha / 2.0)), 2.0 / alpha);
    const double third = std::pow(num / den, 2.0 / alpha);
    return std::min({1.0, second, third});
}

double compute_c_alpha(double E, double A, double alpha, double b2_l1) {
    if (!(E > 0.0 && A > 0.0 && alpha > 0.0 && b2_l1 > 0.0))
        throw std::invalid_argument("compute_c_alpha: all inputs must be positive");
    const double g32 = specfun::gamma_fn(1.5);
    const double tail = specfun::gamma_fn(alpha / 2.0) /
                        (2.0 * specfun::gamma_fn(alpha / 2.0 + 1.0));
    return 4.0 * b2_l1 * A * g32 * std::max(E / alpha, tail);
}

double nonlinearity_budget(double E) {
    if (!(E >= 0.0))
        throw std::invalid_argument("nonlinearity_budget: E must be >= 0");
    auto g = [](double z) {
        return std::abs(3.0 * z * z - 1.0) + std::abs(6.0 * z) + 6.0;
    };
    double best = g(0.0);
    const double crit = 1.0 / std::sqrt(3.0);
    if (E >= crit) best = std::max(best, g(crit));
    best = std::max(best, g(E));
    for (int i = 1; i < 256; ++i)
        best = std::max(best, g(E * i / 256.0));
    return best;
}

LocalTimeBound local_time_exp(double u0_linf, double u0_orlicz,
                              const ExpType& nl, double alpha, double im,
                              double aleph) {
    if (!(aleph > 1.0))
        throw std::invalid_argument("local_time_exp: aleph must be > 1");
    if (!(nl.m > 2.0 || nl.m == 1.0))
        throw std::invalid_argument("local_time_exp: m must satisfy m>2 or m=1");
    const double p = nl.p_exp;
    const double i0 =
        2.0 * std::pow(kLog2, -1.0 / p) * (u0_linf + u0_orlicz) + im;
    const double g1 = std::pow(specfun::gamma_fn(aleph + 1.0),
                               1.0 / (aleph * p));
    const double g2 = std::pow(
        specfun::gamma_fn(aleph * (nl.m - 1.0) / (aleph - 1.0) + 1.0),
        (aleph - 1.0) / (aleph * p));
    const double im1 = 2.0 * nl.L * (2.0 + g1 * g2) *
                       std::pow(kLog2, -1.0 / p) *
                       std::pow(i0, nl.m - 1.0) *
                       std::exp(nl.kappa * std::pow(i0, p));
    LocalTimeBound out;
    out.im1 = im1;
    out.t_bound = std::pow(alpha / im1, 1.0 / alpha);
    return out;
}

}  // namespace fbh::solver
