#include "fbh/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fbh/orlicz.hpp"
#include "fbh/random_field.hpp"
#include "fbh/verify.hpp"

namespace fbh::cli {

using nlohmann::ordered_json;

std::string command_name(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Picard: return "picard";
        case Command::Kernel: return "kernel";
        case Command::Orlicz: return "orlicz";
        case Command::Specfun: return "specfun";
        case Command::Verify: return "verify";
    }
    return "solve";
}

Command parse_command(const std::string& name) {
    if (name == "solve") return Command::Solve;
    if (name == "picard") return Command::Picard;
    if (name == "kernel") return Command::Kernel;
    if (name == "orlicz") return Command::Orlicz;
    if (name == "specfun") return Command::Specfun;
    if (name == "verify") return Command::Verify;
    throw std::invalid_argument("unknown command: " + name);
}

namespace {

void expect_keys(const ordered_json& j, const std::set<std::string>& allowed,
                 const std::string& ctx) {
    if (!j.is_object())
        throw std::invalid_argument("manifest: " + ctx + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw std::invalid_argument("manifest: unknown key '" + key +
                                        "' in " + ctx);
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

solver::FractionalParams RunManifest::fractional() const {
    solver::FractionalParams fp;
    fp.alpha = alpha;
    if (nonlinearity == "cahn_hilliard")
        fp.nonlinearity = solver::CahnHilliard{};
    else
        fp.nonlinearity = exp_params;
    return fp;
}

double RunManifest::mesh_grading() const {
    return mesh.grading.value_or(std::max(1.0, 2.0 / alpha));
}

RunManifest parse_manifest(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("manifest parse error: ") +
                                    e.what());
    }
    expect_keys(j,
                {"command", "grid", "fractional", "time_mesh", "initial",
                 "output_dir", "seed", "threads", "blow_up_threshold",
                 "fail_on_blowup", "trace", "snapshots", "picard", "kernel",
                 "orlicz", "specfun", "verify"},
                "top level");
    if (!j.contains("command"))
        throw std::invalid_argument("manifest: missing required key 'command'");

    RunManifest m;
    m.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        expect_keys(g, {"dim", "points_per_axis", "half_length"}, "grid");
        read(g, "dim", m.grid.dim);
        read(g, "points_per_axis", m.grid.points_per_axis);
        read(g, "half_length", m.grid.half_length);
    }
    if (j.contains("fractional")) {
        const auto& f = j.at("fractional");
        expect_keys(f, {"alpha", "nonlinearity"}, "fractional");
        read(f, "alpha", m.alpha);
        if (f.contains("nonlinearity")) {
            const auto& nl = f.at("nonlinearity");
            expect_keys(nl, {"type", "m", "kappa", "p", "L"},
                        "fractional.nonlinearity");
            std::string type = "cahn_hilliard";
            read(nl, "type", type);
            if (type == "cahn_hilliard") {
                m.nonlinearity = "cahn_hilliard";
            } else if (type == "exp") {
                m.nonlinearity = "exp";
                read(nl, "m", m.exp_params.m);
                read(nl, "kappa", m.exp_params.kappa);
                read(nl, "p", m.exp_params.p_exp);
                read(nl, "L", m.exp_params.L);
            } else {
                throw std::invalid_argument(
                    "manifest: nonlinearity.type must be 'cahn_hilliard' or "
                    "'exp'");
            }
        }
    }
    if (j.contains("time_mesh")) {
        const auto& t = j.at("time_mesh");
        expect_keys(t, {"T", "steps", "grading"}, "time_mesh");
        read(t, "T", m.mesh.T);
        read(t, "steps", m.mesh.steps);
        if (t.contains("grading"))
            m.mesh.grading = t.at("grading").get<double>();
    }
    if (j.contains("initial")) {
        const auto& i = j.at("initial");
        expect_keys(i,
                    {"kind", "amplitude", "width", "cutoff_frac", "extent",
                     "path"},
                    "initial");
        read(i, "kind", m.initial.kind);
        read(i, "amplitude", m.initial.amplitude);
        read(i, "width", m.initial.width);
        read(i, "cutoff_frac", m.initial.cutoff_frac);
        read(i, "extent", m.initial.extent);
        read(i, "path", m.initial.path);
    }
    read(j, "output_dir", m.output_dir);
    read(j, "seed", m.seed);
    read(j, "threads", m.threads);
    read(j, "blow_up_threshold", m.blow_up_threshold);
    read(j, "fail_on_blowup", m.fail_on_blowup);
    if (j.contains("trace")) {
        const auto& t = j.at("trace");
        expect_keys(t, {"p", "orlicz_p"}, "trace");
        read(t, "p", m.trace_p);
        read(t, "orlicz_p", m.orlicz_p);
    }
    if (j.contains("snapshots"))
        m.snapshot_nodes = j.at("snapshots").get<std::vector<int>>();
    if (j.contains("picard")) {
        const auto& p = j.at("picard");
        expect_keys(p, {"iterations", "E"}, "picard");
        read(p, "iterations", m.picard.iterations);
        read(p, "E", m.picard.E);
    }
    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        expect_keys(k, {"which", "k", "t", "nyquist_tol"}, "kernel");
        read(k, "which", m.kernel.which);
        read(k, "k", m.kernel.k);
        read(k, "t", m.kernel.t);
        read(k, "nyquist_tol", m.kernel.nyquist_tol);
    }
    if (j.contains("orlicz")) {
        const auto& o = j.at("orlicz");
        expect_keys(o, {"h", "t_samples"}, "orlicz");
        read(o, "h", m.orlicz.h);
        if (o.contains("t_samples"))
            m.orlicz.t_samples = o.at("t_samples").get<std::vector<double>>();
    }
    if (j.contains("specfun")) {
        const auto& s = j.at("specfun");
        expect_keys(s, {"op", "alpha", "beta", "x", "zeta", "theta"},
                    "specfun");
        read(s, "op", m.specfun.op);
        read(s, "alpha", m.specfun.alpha);
        read(s, "beta", m.specfun.beta);
        read(s, "x", m.specfun.x);
        read(s, "zeta", m.specfun.zeta);
        read(s, "theta", m.specfun.theta);
    }
    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        expect_keys(v,
                    {"suite", "orlicz_seeds", "dims", "alphas", "points_1d",
                     "points_2d"},
                    "verify");
        read(v, "suite", m.verify.suite);
        read(v, "orlicz_seeds", m.verify.orlicz_seeds);
        if (v.contains("dims"))
            m.verify.dims = v.at("dims").get<std::vector<int>>();
        if (v.contains("alphas"))
            m.verify.alphas = v.at("alphas").get<std::vector<double>>();
        read(v, "points_1d", m.verify.points_1d);
        read(v, "points_2d", m.verify.points_2d);
    }

    // validation: fail early with the violated invariant by name
    if (!(m.alpha > 0.0 && m.alpha < 1.0))
        throw std::invalid_argument(
            "manifest: alpha must lie in (0,1), got " + std::to_string(m.alpha));
    if (m.nonlinearity == "exp") {
        if (!(m.exp_params.m > 2.0 || m.exp_params.m == 1.0))
            throw std::invalid_argument(
                "manifest: m must satisfy m>2 or m=1, got " +
                std::to_string(m.exp_params.m));
        if (!(m.exp_params.p_exp > 1.0))
            throw std::invalid_argument("manifest: p must be > 1");
        if (!(m.exp_params.kappa > 0.0))
            throw std::invalid_argument("manifest: kappa must be > 0");
    }
    if (m.grid.dim < 1 || m.grid.dim > 3)
        throw std::invalid_argument("manifest: grid.dim must be 1, 2 or 3");
    if (m.grid.points_per_axis < 8 ||
        (m.grid.points_per_axis & (m.grid.points_per_axis - 1)) != 0)
        throw std::invalid_argument(
            "manifest: grid.points_per_axis must be a power of two >= 8");
    if (!(m.grid.half_length > 0.0))
        throw std::invalid_argument("manifest: grid.half_length must be > 0");
    if (!(m.mesh.T > 0.0))
        throw std::invalid_argument("manifest: time_mesh.T must be > 0");
    if (m.mesh.steps < 1)
        throw std::invalid_argument("manifest: time_mesh.steps must be >= 1");
    if (m.mesh.grading && !(*m.mesh.grading >= 1.0))
        throw std::invalid_argument("manifest: time_mesh.grading must be >= 1");
    if (m.threads < 1)
        throw std::invalid_argument("manifest: threads must be >= 1");
    const std::set<std::string> kinds{"gaussian", "random", "zero",
                                      "indicator", "snapshot"};
    if (!kinds.count(m.initial.kind))
        throw std::invalid_argument("manifest: unknown initial.kind '" +
                                    m.initial.kind + "'");
    if (m.kernel.which != "K1" && m.kernel.which != "K2")
        throw std::invalid_argument("manifest: kernel.which must be K1 or K2");
    if (m.command == Command::Picard && m.nonlinearity != "cahn_hilliard")
        throw std::invalid_argument(
            "manifest: picard requires the cahn_hilliard nonlinearity");
    if (m.command == Command::Picard && !(m.alpha > 0.5))
        throw std::invalid_argument("manifest: picard requires alpha > 1/2");
    return m;
}

RunManifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("manifest: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

std::string emit_manifest(const RunManifest& m) {
    ordered_json j;
    j["command"] = command_name(m.command);
    j["grid"] = {{"dim", m.grid.dim},
                 {"points_per_axis", m.grid.points_per_axis},
                 {"half_length", m.grid.half_length}};
    ordered_json nl;
    if (m.nonlinearity == "cahn_hilliard") {
        nl = {{"type", "cahn_hilliard"}};
    } else {
        nl = {{"type", "exp"},
              {"m", m.exp_params.m},
              {"kappa", m.exp_params.kappa},
              {"p", m.exp_params.p_exp},
              {"L", m.exp_params.L}};
    }
    j["fractional"] = {{"alpha", m.alpha}, {"nonlinearity", nl}};
    j["time_mesh"] = {{"T", m.mesh.T},
                      {"steps", m.mesh.steps},
                      {"grading", m.mesh_grading()}};
    j["initial"] = {{"kind", m.initial.kind},
                    {"amplitude", m.initial.amplitude},
                    {"width", m.initial.width},
                    {"cutoff_frac", m.initial.cutoff_frac},
                    {"extent", m.initial.extent},
                    {"path", m.initial.path}};
    j["output_dir"] = m.output_dir;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["blow_up_threshold"] = m.blow_up_threshold;
    j["fail_on_blowup"] = m.fail_on_blowup;
    j["trace"] = {{"p", m.trace_p}, {"orlicz_p", m.orlicz_p}};
    j["snapshots"] = m.snapshot_nodes;
    j["picard"] = {{"iterations", m.picard.iterations}, {"E", m.picard.E}};
    j["kernel"] = {{"which", m.kernel.which},
                   {"k", m.kernel.k},
                   {"t", m.kernel.t},
                   {"nyquist_tol", m.kernel.nyquist_tol}};
    j["orlicz"] = {{"h", m.orlicz.h}, {"t_samples", m.orlicz.t_samples}};
    j["specfun"] = {{"op", m.specfun.op},   {"alpha", m.specfun.alpha},
                    {"beta", m.specfun.beta}, {"x", m.specfun.x},
                    {"zeta", m.specfun.zeta}, {"theta", m.specfun.theta}};
    j["verify"] = {{"suite", m.verify.suite},
                   {"orlicz_seeds", m.verify.orlicz_seeds},
                   {"dims", m.verify.dims},
                   {"alphas", m.verify.alphas},
                   {"points_1d", m.verify.points_1d},
                   {"points_2d", m.verify.points_2d}};
    return j.dump(2) + "\n";
}

bool operator==(const RunManifest& a, const RunManifest& b) {
    return emit_manifest(a) == emit_manifest(b);
}

namespace {

namespace fs = std::filesystem;

Field build_initial(const RunManifest& m, const GridPtr& grid) {
    const auto& i = m.initial;
    if (i.kind == "gaussian") return gaussian_bump(grid, i.amplitude, i.width);
    if (i.kind == "random")
        return random_smooth_field(grid, m.seed, i.amplitude, i.cutoff_frac);
    if (i.kind == "zero") return Field(grid);
    if (i.kind == "indicator")
        return box_indicator(grid, i.amplitude, i.extent);
    Field f = read_snapshot(i.path);
    return f;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

void write_trace_csv(const fs::path& path,
                     const std::vector<solver::NormTraceRow>& rows) {
    std::ofstream out(path);
    out << "t,l2,linf,lp,orlicz,blow_up\n";
    for (const auto& r : rows)
        out << fmt17(r.t) << "," << fmt17(r.l2) << "," << fmt17(r.linf) << ","
            << fmt17(r.lp) << "," << fmt17(r.orlicz) << ","
            << (r.blow_up ? 1 : 0) << "\n";
}

int run_solve(const RunManifest& m, const fs::path& dir) {
    auto grid = make_grid(m.grid.dim, m.grid.points_per_axis,
                          m.grid.half_length);
    const Field u0 = build_initial(m, grid);
    solver::FractionalParams fp = m.fractional();
    solver::TimeMesh mesh;
    mesh.T = m.mesh.T;
    mesh.steps = m.mesh.steps;
    mesh.grading = m.mesh_grading();
    solver::MarchOptions opt;
    opt.blow_up_threshold = m.blow_up_threshold;
    opt.trace_p = m.trace_p;
    opt.orlicz_p = m.orlicz_p;
    opt.threads = m.threads;
    opt.snapshot_nodes = m.snapshot_nodes;

    const auto traj = solver::march(u0, fp, mesh, opt);
    write_trace_csv(dir / "trace.csv", traj.trace);
    for (const auto& [node, field] : traj.snapshots) {
        write_snapshot(field, (dir / ("state_node" + std::to_string(node) +
                                      ".fbh")).string());
        write_csv(field, (dir / ("state_node" + std::to_string(node) +
                                 ".csv")).string());
    }
    write_snapshot(traj.final_state, (dir / "state_final.fbh").string());

    ordered_json constants;
    constants["blow_up"] = traj.blow_up;
    constants["blow_up_index"] = traj.blow_up_index;
    if (m.nonlinearity == "exp") {
        orlicz::OrliczParams op;
        op.p_exp = m.exp_params.p_exp;
        const auto lb = solver::local_time_exp(
            kernels::lp_norm(u0, kernels::kInfinity),
            orlicz::luxemburg_norm(u0, op), m.exp_params, m.alpha,
            /*im=*/1.0, /*aleph=*/2.0);
        constants["im1"] = lb.im1;
        constants["t_bound"] = lb.t_bound;
        // small-data ball radius for h > max(p, N/4): take the manifest h
        // when admissible, else the smallest admissible integer step above
        const double h_min = std::max(m.exp_params.p_exp, m.grid.dim / 4.0);
        const double h = (m.orlicz.h > h_min) ? m.orlicz.h : h_min + 1.0;
        constants["epsilon_radius_h"] = h;
        constants["epsilon_radius"] = std::pow(
            3.0 * h * m.exp_params.kappa, -1.0 / m.exp_params.p_exp);
    } else if (m.alpha > 0.5) {
        const double E =
            std::max(kernels::lp_norm(u0, kernels::kInfinity), 1e-12);
        const double A = solver::nonlinearity_budget(E);
        const double b2 =
            kernels::lp_norm(kernels::b_profile(2, grid), 1.0);
        constants["E"] = E;
        constants["A"] = A;
        constants["b2_l1"] = b2;
        constants["T0"] = solver::compute_t0(E, A, m.alpha, b2);
        constants["C_alpha"] = solver::compute_c_alpha(E, A, m.alpha, b2);
    }
    write_text(dir / "constants.json", constants.dump(2) + "\n");

    if (traj.blow_up && m.fail_on_blowup) return kExitBlowUpForbidden;
    return kExitOk;
}

int run_picard(const RunManifest& m, const fs::path& dir) {
    auto grid = make_grid(m.grid.dim, m.grid.points_per_axis,
                          m.grid.half_length);
    const Field u0 = build_initial(m, grid);
    solver::FractionalParams fp = m.fractional();
    solver::TimeMesh mesh;
    mesh.T = m.mesh.T;
    mesh.steps = m.mesh.steps;
    mesh.grading = m.mesh_grading();
    const auto run = solver::picard_solve(u0, fp, mesh, m.picard.iterations,
                                          m.picard.E);
    std::ofstream out(dir / "picard.csv");
    out << "j,d_j,bound_j,envelope_j,iterate_sup\n";
    const double ct = run.C_alpha * std::pow(mesh.T, m.alpha / 2.0);
    for (std::size_t jd = 0; jd < run.d_sup.size(); ++jd) {
        const double bound =
            std::pow(ct, static_cast<double>(jd + 1)) /
            specfun::gamma_fn(m.alpha * jd / 2.0 + m.alpha / 2.0 + 1.0);
        const double envelope = std::pow(m.alpha / 2.0, static_cast<double>(jd + 1));
        out << jd << "," << fmt17(run.d_sup[jd]) << "," << fmt17(bound) << ","
            << fmt17(envelope) << "," << fmt17(run.iterate_sup[jd + 1]) << "\n";
    }
    out.close();
    ordered_json constants;
    constants["T0"] = run.T0;
    constants["C_alpha"] = run.C_alpha;
    constants["E"] = run.E;
    constants["A"] = run.A;
    constants["b2_l1"] = run.b2_l1;
    write_text(dir / "constants.json", constants.dump(2) + "\n");
    return kExitOk;
}

int run_kernel(const RunManifest& m, const fs::path& dir) {
    auto grid = make_grid(m.grid.dim, m.grid.points_per_axis,
                          m.grid.half_length);
    kernels::KernelSpec spec;
    spec.which = m.kernel.which == "K2" ? kernels::Which::K2
                                        : kernels::Which::K1;
    spec.alpha = m.alpha;
    spec.t = m.kernel.t;
    if (m.kernel.k % 2 == 0)
        spec.laplacian_power = m.kernel.k / 2;
    else
        spec.deriv = {m.kernel.k, 0, 0};
    kernels::SynthesisOptions sopt;
    sopt.nyquist_tol = m.kernel.nyquist_tol;
    const Field kf = kernels::synthesize_kernel(spec, grid, sopt);
    write_snapshot(kf, (dir / "kernel.fbh").string());
    write_csv(kf, (dir / "kernel.csv").string());
    ordered_json info;
    info["l1"] = kernels::lp_norm(kf, 1.0);
    info["l2"] = kernels::lp_norm(kf, 2.0);
    info["linf"] = kernels::lp_norm(kf, kernels::kInfinity);
    info["mass"] = kf.mean() * std::pow(2.0 * m.grid.half_length, m.grid.dim);
    info["theta_1"] = kernels::theta_constant(1.0, grid);
    info["theta_inf"] = kernels::theta_constant(kernels::kInfinity, grid);
    if (kernels::is_admissible(m.kernel.k, 1.0, m.grid.dim))
        info["smoothing_constant_l1"] = kernels::smoothing_constant(
            spec.which, m.kernel.k, 1.0, m.alpha, grid);
    write_text(dir / "kernel_info.json", info.dump(2) + "\n");
    return kExitOk;
}

int run_orlicz(const RunManifest& m, const fs::path& dir) {
    auto grid = make_grid(m.grid.dim, m.grid.points_per_axis,
                          m.grid.half_length);
    const Field f = build_initial(m, grid);
    orlicz::OrliczParams op;
    op.p_exp = m.orlicz_p;
    std::vector<EstimateReport> reports;
    reports.push_back(orlicz::embedding_gap_lq(f, m.orlicz_p,
                                               std::max(m.orlicz_p, 2.0)));
    reports.push_back(orlicz::embedding_gap_linf(f, m.orlicz_p, 1.0));
    auto sm = orlicz::orlicz_smoothing_gap(f, m.orlicz.h, m.orlicz.t_samples,
                                           m.alpha, m.orlicz_p);
    reports.insert(reports.end(), sm.begin(), sm.end());
    write_reports_csv(reports, (dir / "orlicz_report.csv").string());
    write_reports_json(reports, (dir / "orlicz_report.json").string());
    ordered_json info;
    info["luxemburg_norm"] = orlicz::luxemburg_norm(f, op);
    write_text(dir / "orlicz_norm.json", info.dump(2) + "\n");
    return verify::all_pass(reports) ? kExitOk : kExitVerifyFailed;
}

int run_specfun(const RunManifest& m, const fs::path& dir) {
    const auto& s = m.specfun;
    double value = 0.0;
    if (s.op == "gamma") {
        value = specfun::gamma_fn(s.x);
    } else if (s.op == "mittag_leffler_neg") {
        value = specfun::mittag_leffler_neg({s.alpha, s.beta}, s.x);
    } else if (s.op == "m_wright") {
        value = specfun::m_wright(s.alpha, s.zeta);
    } else if (s.op == "mwright_moment") {
        value = specfun::mwright_moment(s.alpha, s.theta, {1e-8, 1e-8, 4000});
    } else {
        throw std::invalid_argument("specfun: unknown op '" + s.op + "'");
    }
    std::printf("%s = %.17g\n", s.op.c_str(), value);
    ordered_json out;
    out["op"] = s.op;
    out["value"] = value;
    write_text(dir / "specfun.json", out.dump(2) + "\n");
    return kExitOk;
}

int run_verify(const RunManifest& m, const fs::path& dir) {
    verify::SuiteOptions opt;
    opt.threads = m.threads;
    opt.seed = m.seed;
    opt.orlicz_seeds = m.verify.orlicz_seeds;
    opt.dims = m.verify.dims;
    opt.alphas = m.verify.alphas;
    opt.points_1d = m.verify.points_1d;
    opt.points_2d = m.verify.points_2d;
    if (m.verify.suite != "default")
        throw std::invalid_argument("verify: unknown suite '" +
                                    m.verify.suite + "'");
    const auto reports = verify::run_default_suite(opt);
    write_reports_csv(reports, (dir / "verify_report.csv").string());
    write_reports_json(reports, (dir / "verify_report.json").string());
    write_text(dir / "verify_matrix.txt", pass_matrix(reports));
    std::fputs(pass_matrix(reports).c_str(), stdout);
    return verify::all_pass(reports) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const RunManifest& m) {
    fs::path dir(m.output_dir);
    fs::create_directories(dir);
    write_text(dir / "manifest.json", emit_manifest(m));
    switch (m.command) {
        case Command::Solve: return run_solve(m, dir);
        case Command::Picard: return run_picard(m, dir);
        case Command::Kernel: return run_kernel(m, dir);
        case Command::Orlicz: return run_orlicz(m, dir);
        case Command::Specfun: return run_specfun(m, dir);
        case Command::Verify: return run_verify(m, dir);
    }
    return kExitValidation;
}

}  // namespace fbh::cli
